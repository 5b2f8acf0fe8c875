// Copyright 2026 The BiSELD Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BISELD_BISELD_H_
#define BISELD_BISELD_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BISELD_API __declspec(dllexport)
#else
#define BISELD_API __attribute__((visibility("default")))
#endif

/* Status codes. Every call other than the accessors returns one. */
typedef enum biseld_status {
  BISELD_OK = 0,
  BISELD_ERR_INVALID_ARGUMENT = 1,
  BISELD_ERR_IO = 2,
  BISELD_ERR_PARSE = 3,
  BISELD_ERR_DOMAIN = 4,
  BISELD_ERR_SHAPE = 5,
  BISELD_ERR_INTERNAL = 6
} biseld_status;

/* Opaque handles. */
typedef struct biseld_config biseld_config;
typedef struct biseld_graph biseld_graph;
typedef struct biseld_weights biseld_weights;

BISELD_API const char* biseld_version(void);
/* Message of the last failed call on this thread ("" when none). */
BISELD_API const char* biseld_last_error(void);
BISELD_API const char* biseld_status_name(biseld_status s);
/* Frees strings returned through char** out-parameters. */
BISELD_API void biseld_string_free(char* s);

/* Configuration. */
BISELD_API biseld_status biseld_config_default(biseld_config** out);
BISELD_API biseld_status biseld_config_load(const char* path, biseld_config** out);
BISELD_API biseld_status biseld_config_parse(const char* json, biseld_config** out);
BISELD_API biseld_status biseld_config_set_seed(biseld_config* cfg, uint64_t seed);
BISELD_API biseld_status biseld_config_get_seed(const biseld_config* cfg, uint64_t* seed);
BISELD_API biseld_status biseld_config_set_hrir_dir(biseld_config* cfg, const char* dir);
BISELD_API biseld_status biseld_config_set_tsp_file(biseld_config* cfg, const char* path);
BISELD_API biseld_status biseld_config_set_speaker(biseld_config* cfg, double v_eg,
                                                   double v_box_cc, double distance_m);
BISELD_API biseld_status biseld_config_to_json(const biseld_config* cfg, char** json_out);
BISELD_API void biseld_config_free(biseld_config* cfg);

/* Pipelines. Each writes under its output path and returns a JSON summary. */
BISELD_API biseld_status biseld_derive_hrtf(const biseld_config* cfg, const char* bir_dir,
                                            const char* oir_path, const char* out_dir,
                                            char** summary_json);
BISELD_API biseld_status biseld_analyze_cues(const biseld_config* cfg, const char* hrir_dir,
                                             const char* out_dir, char** summary_json);
/* csv_prefix may be NULL. */
BISELD_API biseld_status biseld_extract_btff(const biseld_config* cfg, const char* wav_path,
                                             const char* out_path, const char* csv_prefix,
                                             char** summary_json);
/* noise_dir may be NULL in clean mode. */
BISELD_API biseld_status biseld_synth_dataset(const biseld_config* cfg, const char* event_dir,
                                              const char* noise_dir, const char* out_dir,
                                              char** summary_json);
/* Writes response.csv and summary.json into out_dir. */
BISELD_API biseld_status biseld_simulate_speaker(const biseld_config* cfg, const char* out_dir,
                                                 char** summary_json);
BISELD_API biseld_status biseld_evaluate(const biseld_config* cfg, const char* ref_dir,
                                         const char* pred_dir, const char* out_json,
                                         char** report_json);

/* Network graphs and weights. */
BISELD_API biseld_status biseld_graph_load(const char* path, biseld_graph** out);
BISELD_API biseld_status biseld_graph_parse(const char* json, biseld_graph** out);
BISELD_API biseld_status biseld_graph_default(biseld_graph** out);
BISELD_API biseld_status biseld_graph_count_params(const biseld_graph* g, uint64_t* trainable,
                                                   uint64_t* non_trainable);
/* Per-layer parameter table and output shapes for `frames` input steps. */
BISELD_API biseld_status biseld_graph_summary(const biseld_graph* g, size_t frames,
                                              char** summary_json);
BISELD_API void biseld_graph_free(biseld_graph* g);

BISELD_API biseld_status biseld_weights_load(const biseld_graph* g, const char* path,
                                             biseld_weights** out);
BISELD_API biseld_status biseld_weights_random(const biseld_graph* g, uint64_t seed,
                                               biseld_weights** out);
BISELD_API biseld_status biseld_weights_save(const biseld_weights* w, const char* path);
BISELD_API void biseld_weights_free(biseld_weights* w);

/* Runs the graph on a BTFF file and writes decoded events as label rows. */
BISELD_API biseld_status biseld_infer(const biseld_config* cfg, const biseld_graph* g,
                                      const biseld_weights* w, const char* btff_path,
                                      const char* out_csv, char** summary_json);
/* pivot may be NULL for the graph's first pivot. Writes the upscaled map as a
   CSV grid and a JSON sidecar at <out_csv without extension>.json. */
BISELD_API biseld_status biseld_vam(const biseld_config* cfg, const biseld_graph* g,
                                    const biseld_weights* w, const char* btff_path,
                                    int class_index, const char* pivot, const char* out_csv,
                                    char** summary_json);

/* Scalar entry points. */
BISELD_API biseld_status biseld_hz_to_mel(double hz, double* mel);
BISELD_API biseld_status biseld_mel_to_hz(double mel, double* hz);
BISELD_API biseld_status biseld_trinity_kernels(int c_out, int* b1, int* b2, int* b3,
                                                int* total_kernels);
/* Interaural time difference of two equal-length channels, in seconds. */
BISELD_API biseld_status biseld_itd(const double* left, const double* right, size_t n,
                                    double fs, double* seconds);
BISELD_API biseld_status biseld_angular_error(double az1_deg, double el1_deg, double az2_deg,
                                              double el2_deg, double* degrees);

#ifdef __cplusplus
}
#endif

#endif /* BISELD_BISELD_H_ */
