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

#include "biseld/biseld.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "btff/btff.h"
#include "btff/mel.h"
#include "common/error.h"
#include "config/config.h"
#include "cues/cues.h"
#include "cues/report.h"
#include "dataset/synth.h"
#include "dsp/resample.h"
#include "dsp/wav.h"
#include "hrtf/database.h"
#include "json.hpp"
#include "metrics/labels.h"
#include "metrics/metrics.h"
#include "net/decode.h"
#include "net/graph.h"
#include "net/layers.h"
#include "net/weights.h"
#include "speaker/speaker.h"
#include "vam/vam.h"

#ifndef BISELD_VERSION
#define BISELD_VERSION "0.0.0"
#endif

struct biseld_config {
  biseld::config::ToolConfig cfg;
};
struct biseld_graph {
  biseld::net::Graph graph;
};
struct biseld_weights {
  biseld::net::Weights weights;
};

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using biseld::Error;
using biseld::ErrorKind;

thread_local std::string g_last_error;

biseld_status StatusOf(ErrorKind k) {
  switch (k) {
    case ErrorKind::kInvalidArgument: return BISELD_ERR_INVALID_ARGUMENT;
    case ErrorKind::kIo: return BISELD_ERR_IO;
    case ErrorKind::kParse: return BISELD_ERR_PARSE;
    case ErrorKind::kDomain: return BISELD_ERR_DOMAIN;
    case ErrorKind::kShape: return BISELD_ERR_SHAPE;
  }
  return BISELD_ERR_INTERNAL;
}

template <typename F>
biseld_status Guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return BISELD_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return StatusOf(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BISELD_ERR_INTERNAL;
  } catch (const fs::filesystem_error& e) {
    g_last_error = e.what();
    return BISELD_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BISELD_ERR_INTERNAL;
  }
}

void NonNull(const void* p, const char* what) {
  if (!p) throw biseld::InvalidArgument(std::string(what) + " must not be NULL");
}

char* Dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Emit(char** out, const Json& j) {
  if (out) *out = Dup(j.dump(2));
}

void WriteText(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  if (!os) throw biseld::IoError("cannot write " + p.string());
  os << text;
  if (!os) throw biseld::IoError("write failed: " + p.string());
}

std::string Num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

Json ExtremumJson(const biseld::speaker::Extremum& e, double scale, const char* unit) {
  Json j;
  j["freq_hz"] = e.freq_hz;
  j[unit] = e.value * scale;
  return j;
}

biseld::net::Tensor LoadInput(const std::string& path, double* hop) {
  const biseld::btff::Btff b = biseld::btff::LoadBtff(path);
  biseld::net::Tensor t({b.frames, biseld::btff::kMelBins, biseld::btff::kNumChannels});
  t.data = b.data;
  if (hop) *hop = b.frame_hop_s;
  return t;
}

int WrapAzimuth(double az) {
  int a = static_cast<int>(std::lround(az));
  while (a <= -180) a += 360;
  while (a > 180) a -= 360;
  return a;
}

Json EventsJson(const std::vector<biseld::net::FrameEvent>& events) {
  Json arr = Json::array();
  for (const auto& e : events) {
    Json j;
    j["frame"] = e.frame;
    j["class"] = e.event.class_index;
    j["azimuth_deg"] = e.event.azimuth_deg;
    j["elevation_deg"] = e.event.elevation_deg;
    j["magnitude"] = e.event.magnitude;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace

extern "C" {

const char* biseld_version(void) { return BISELD_VERSION; }

const char* biseld_last_error(void) { return g_last_error.c_str(); }

const char* biseld_status_name(biseld_status s) {
  switch (s) {
    case BISELD_OK: return "ok";
    case BISELD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BISELD_ERR_IO: return "i/o error";
    case BISELD_ERR_PARSE: return "parse error";
    case BISELD_ERR_DOMAIN: return "domain error";
    case BISELD_ERR_SHAPE: return "shape error";
    case BISELD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void biseld_string_free(char* s) { delete[] s; }

biseld_status biseld_config_default(biseld_config** out) {
  return Guard([&] {
    NonNull(out, "out");
    *out = new biseld_config();
  });
}

biseld_status biseld_config_load(const char* path, biseld_config** out) {
  return Guard([&] {
    NonNull(path, "path");
    NonNull(out, "out");
    *out = new biseld_config{biseld::config::ToolConfig::Load(path)};
  });
}

biseld_status biseld_config_parse(const char* json, biseld_config** out) {
  return Guard([&] {
    NonNull(json, "json");
    NonNull(out, "out");
    *out = new biseld_config{biseld::config::ToolConfig::FromJson(json)};
  });
}

biseld_status biseld_config_set_seed(biseld_config* cfg, uint64_t seed) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    cfg->cfg.seed = seed;
    cfg->cfg.synth.seed = seed;
  });
}

biseld_status biseld_config_get_seed(const biseld_config* cfg, uint64_t* seed) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(seed, "seed");
    *seed = cfg->cfg.seed;
  });
}

biseld_status biseld_config_set_hrir_dir(biseld_config* cfg, const char* dir) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(dir, "dir");
    cfg->cfg.hrir_dir = dir;
  });
}

biseld_status biseld_config_set_tsp_file(biseld_config* cfg, const char* path) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(path, "path");
    std::ifstream is(path);
    if (!is) throw biseld::IoError(std::string("cannot open ") + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    try {
      cfg->cfg.speaker.tsp = biseld::speaker::TspSet::FromJson(ss.str());
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(path) + ": " + e.what());
    }
  });
}

biseld_status biseld_config_set_speaker(biseld_config* cfg, double v_eg, double v_box_cc,
                                        double distance_m) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    biseld::config::ToolConfig c = cfg->cfg;
    if (!std::isnan(v_eg)) c.speaker.v_eg = v_eg;
    if (!std::isnan(v_box_cc)) c.speaker.v_box_cc = v_box_cc;
    if (!std::isnan(distance_m)) c.speaker.distance_m = distance_m;
    c.Validate();
    cfg->cfg = c;
  });
}

biseld_status biseld_config_to_json(const biseld_config* cfg, char** json_out) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(json_out, "json_out");
    *json_out = Dup(cfg->cfg.ToJson());
  });
}

void biseld_config_free(biseld_config* cfg) { delete cfg; }

biseld_status biseld_derive_hrtf(const biseld_config* cfg, const char* bir_dir,
                                 const char* oir_path, const char* out_dir,
                                 char** summary_json) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(bir_dir, "bir_dir");
    NonNull(oir_path, "oir_path");
    NonNull(out_dir, "out_dir");
    const auto s = biseld::hrtf::DeriveDatabase(bir_dir, oir_path, out_dir, cfg->cfg.hrtf);
    Json j;
    j["files"] = s.files;
    j["start_index"] = s.start_index;
    j["shift"] = s.shift;
    j["pad_to"] = cfg->cfg.hrtf.window.pad_to;
    j["fallbacks"] = s.fallbacks;
    Emit(summary_json, j);
  });
}

biseld_status biseld_analyze_cues(const biseld_config* cfg, const char* hrir_dir,
                                  const char* out_dir, char** summary_json) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(hrir_dir, "hrir_dir");
    NonNull(out_dir, "out_dir");
    const auto db = biseld::hrtf::LoadDatabase(hrir_dir, cfg->cfg.hrtf.fs, cfg->cfg.hrir_length);
    const auto s = biseld::cues::AnalyzeDatabase(db, out_dir, cfg->cfg.cues);
    Json j;
    j["directions"] = s.directions;
    j["median_plane_directions"] = s.median_directions;
    j["horizontal_plane_directions"] = s.horizontal_directions;
    j["outputs"] = s.outputs;
    Emit(summary_json, j);
  });
}

biseld_status biseld_extract_btff(const biseld_config* cfg, const char* wav_path,
                                  const char* out_path, const char* csv_prefix,
                                  char** summary_json) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(wav_path, "wav_path");
    NonNull(out_path, "out_path");
    const auto& c = cfg->cfg;
    const biseld::dsp::Audio a = biseld::dsp::ReadWav(wav_path);
    if (a.channels.size() != 2) {
      throw biseld::InvalidArgument(std::string(wav_path) + ": expected 2 channels, found " +
                                    std::to_string(a.channels.size()));
    }
    const int fs = static_cast<int>(std::lround(c.stft.fs));
    std::vector<double> l = a.channels[0], r = a.channels[1];
    if (a.fs != fs) {
      l = biseld::dsp::Resample(l, a.fs, fs);
      r = biseld::dsp::Resample(r, a.fs, fs);
    }
    biseld::btff::Btff b = biseld::btff::ExtractBtff(l, r, c.stft, c.bands);
    if (c.standardize) biseld::btff::Standardize(b);
    biseld::btff::SaveBtff(out_path, b);
    Json j;
    j["input"] = wav_path;
    j["input_fs"] = a.fs;
    j["fs"] = fs;
    j["resampled"] = a.fs != fs;
    j["frames"] = b.frames;
    j["mel_bins"] = biseld::btff::kMelBins;
    j["channels"] = biseld::btff::kNumChannels;
    j["frame_hop_s"] = b.frame_hop_s;
    j["standardized"] = c.standardize;
    Json outputs = Json::array({std::string(out_path)});
    if (csv_prefix) {
      for (const auto& p : biseld::btff::SaveBtffCsv(csv_prefix, b)) outputs.push_back(p);
    }
    j["outputs"] = outputs;
    Emit(summary_json, j);
  });
}

biseld_status biseld_synth_dataset(const biseld_config* cfg, const char* event_dir,
                                   const char* noise_dir, const char* out_dir,
                                   char** summary_json) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(event_dir, "event_dir");
    NonNull(out_dir, "out_dir");
    const auto r = biseld::dataset::BuildDataset(cfg->cfg.EffectiveSynth(), event_dir,
                                                 noise_dir ? noise_dir : "", out_dir);
    Json j;
    Json counts;
    std::size_t total = 0;
    for (const char* k : {"train", "valid", "test", "test_h", "test_v"}) {
      counts[k] = r.counts.files.at(k);
      total += r.counts.files.at(k);
    }
    j["counts"] = counts;
    j["total"] = total;
    j["manifest"] = r.manifest_path;
    Emit(summary_json, j);
  });
}

biseld_status biseld_simulate_speaker(const biseld_config* cfg, const char* out_dir,
                                      char** summary_json) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(out_dir, "out_dir");
    namespace sp = biseld::speaker;
    const auto& s = cfg->cfg.speaker;
    const auto freqs = sp::LogGrid(s.points, s.f_lo_hz, s.f_hi_hz);
    const auto table = sp::Response(s.tsp, s.v_eg, s.v_box_cc, s.distance_m, freqs, s.air);
    const sp::SpeakerSummary sum = sp::Summarize(table, s.ref_freq_hz, s.drop_db);

    fs::create_directories(out_dir);
    std::ostringstream csv;
    csv << "freq_hz,excursion_mm,volume_velocity_m3s,pressure_pa,spl_db\n";
    for (const auto& p : table) {
      csv << Num(p.freq_hz) << ',' << Num(std::abs(p.excursion) * 1e3) << ','
          << Num(std::abs(p.volume_velocity)) << ',' << Num(p.pressure) << ','
          << Num(p.spl_db) << '\n';
    }
    WriteText(fs::path(out_dir) / "response.csv", csv.str());

    Json j;
    j["v_eg"] = s.v_eg;
    j["v_box_cc"] = s.v_box_cc;
    j["distance_m"] = s.distance_m;
    j["rolloff_hz"] = sum.rolloff_hz;
    j["rolloff_drop_db"] = s.drop_db;
    j["rolloff_reference"] =
        sum.rolloff_ref_hz ? Json(*sum.rolloff_ref_hz) : Json("spl_peak");
    j["excursion_peak"] = ExtremumJson(sum.excursion_peak, 1e3, "excursion_mm");
    j["volume_velocity_peak"] =
        ExtremumJson(sum.volume_velocity_peak, 1.0, "volume_velocity_m3s");
    j["spl_peak"] = ExtremumJson(sum.spl_peak, 1.0, "spl_db");
    j["tsp"] = Json::parse(s.tsp.ToJson());
    WriteText(fs::path(out_dir) / "summary.json", j.dump(2) + "\n");
    Emit(summary_json, j);
  });
}

biseld_status biseld_evaluate(const biseld_config* cfg, const char* ref_dir,
                              const char* pred_dir, const char* out_json, char** report_json) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(ref_dir, "ref_dir");
    NonNull(pred_dir, "pred_dir");
    const auto r = biseld::metrics::EvaluateDirectories(ref_dir, pred_dir, cfg->cfg.metrics);
    const std::string text = biseld::metrics::ReportJson(r, cfg->cfg.synth.classes);
    if (out_json) {
      const fs::path p(out_json);
      if (p.has_parent_path()) fs::create_directories(p.parent_path());
      WriteText(p, text + "\n");
    }
    if (report_json) *report_json = Dup(text);
  });
}

biseld_status biseld_graph_load(const char* path, biseld_graph** out) {
  return Guard([&] {
    NonNull(path, "path");
    NonNull(out, "out");
    *out = new biseld_graph{biseld::net::Graph::Load(path)};
  });
}

biseld_status biseld_graph_parse(const char* json, biseld_graph** out) {
  return Guard([&] {
    NonNull(json, "json");
    NonNull(out, "out");
    *out = new biseld_graph{biseld::net::Graph::FromJson(json)};
  });
}

biseld_status biseld_graph_default(biseld_graph** out) {
  return Guard([&] {
    NonNull(out, "out");
    *out = new biseld_graph{biseld::net::Graph::FromJson(biseld::net::DefaultGraphJson())};
  });
}

biseld_status biseld_graph_count_params(const biseld_graph* g, uint64_t* trainable,
                                        uint64_t* non_trainable) {
  return Guard([&] {
    NonNull(g, "graph");
    const auto pc = g->graph.CountParams();
    if (trainable) *trainable = pc.trainable;
    if (non_trainable) *non_trainable = pc.non_trainable;
  });
}

biseld_status biseld_graph_summary(const biseld_graph* g, size_t frames, char** summary_json) {
  return Guard([&] {
    NonNull(g, "graph");
    NonNull(summary_json, "summary_json");
    const auto& graph = g->graph;
    const std::size_t t = frames ? frames : graph.MinFrames();
    const auto shapes = graph.InferShapes(t);
    const auto params = graph.LayerParams();
    const auto total = graph.CountParams();
    Json j;
    j["name"] = graph.name();
    j["frames"] = t;
    Json layers = Json::array();
    for (std::size_t i = 0; i < graph.layers().size(); ++i) {
      const auto& l = graph.layers()[i];
      Json lj;
      lj["name"] = l.name;
      lj["kind"] = biseld::net::LayerKindName(l.kind);
      lj["output_shape"] = shapes[i];
      lj["trainable"] = params[i].trainable;
      lj["non_trainable"] = params[i].non_trainable;
      layers.push_back(lj);
    }
    j["layers"] = layers;
    j["trainable"] = total.trainable;
    j["non_trainable"] = total.non_trainable;
    j["total"] = total.total();
    Emit(summary_json, j);
  });
}

void biseld_graph_free(biseld_graph* g) { delete g; }

biseld_status biseld_weights_load(const biseld_graph* g, const char* path, biseld_weights** out) {
  return Guard([&] {
    NonNull(path, "path");
    NonNull(out, "out");
    auto w = biseld::net::LoadWeights(path);
    if (g) g->graph.CheckWeights(w);
    *out = new biseld_weights{std::move(w)};
  });
}

biseld_status biseld_weights_random(const biseld_graph* g, uint64_t seed, biseld_weights** out) {
  return Guard([&] {
    NonNull(g, "graph");
    NonNull(out, "out");
    *out = new biseld_weights{g->graph.RandomWeights(seed)};
  });
}

biseld_status biseld_weights_save(const biseld_weights* w, const char* path) {
  return Guard([&] {
    NonNull(w, "weights");
    NonNull(path, "path");
    biseld::net::SaveWeights(path, w->weights);
  });
}

void biseld_weights_free(biseld_weights* w) { delete w; }

biseld_status biseld_infer(const biseld_config* cfg, const biseld_graph* g,
                           const biseld_weights* w, const char* btff_path, const char* out_csv,
                           char** summary_json) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(g, "graph");
    NonNull(w, "weights");
    NonNull(btff_path, "btff_path");
    NonNull(out_csv, "out_csv");
    double hop = 0.0;
    const auto input = LoadInput(btff_path, &hop);
    const auto out = g->graph.Forward(w->weights, input);
    const auto events = biseld::net::DecodeSequence(out, cfg->cfg.detection_threshold);
    // Output steps are converted to deci-second label frames.
    const double out_hop = hop * static_cast<double>(g->graph.MinFrames());
    std::vector<biseld::metrics::LabelRow> rows;
    for (const auto& e : events) {
      const int frame = static_cast<int>(std::floor(static_cast<double>(e.frame) * out_hop / 0.1 + 1e-6));
      biseld::metrics::LabelRow row{frame, static_cast<int>(e.event.class_index),
                                    WrapAzimuth(e.event.azimuth_deg),
                                    static_cast<int>(std::lround(e.event.elevation_deg))};
      const bool dup = std::any_of(rows.begin(), rows.end(), [&](const auto& x) {
        return x.frame == row.frame && x.class_index == row.class_index;
      });
      if (!dup) rows.push_back(row);
    }
    biseld::metrics::SortRows(rows);
    const fs::path p(out_csv);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    biseld::metrics::WriteLabels(out_csv, rows);
    Json j;
    j["input"] = btff_path;
    j["input_frames"] = input.dim(0);
    j["output_frames"] = out.dim(0);
    j["output_hop_s"] = out_hop;
    j["threshold"] = cfg->cfg.detection_threshold;
    j["rows"] = rows.size();
    j["events"] = EventsJson(events);
    Emit(summary_json, j);
  });
}

biseld_status biseld_vam(const biseld_config* cfg, const biseld_graph* g, const biseld_weights* w,
                         const char* btff_path, int class_index, const char* pivot,
                         const char* out_csv, char** summary_json) {
  return Guard([&] {
    NonNull(cfg, "cfg");
    NonNull(g, "graph");
    NonNull(w, "weights");
    NonNull(btff_path, "btff_path");
    NonNull(out_csv, "out_csv");
    if (class_index < 0 || class_index >= static_cast<int>(biseld::net::kNumClasses)) {
      throw biseld::InvalidArgument("class index must lie in [0, 11]");
    }
    const auto input = LoadInput(btff_path, nullptr);
    biseld::vam::VamOptions opts;
    opts.class_index = static_cast<std::size_t>(class_index);
    if (pivot) opts.pivot = pivot;
    opts.relative_step = cfg->cfg.vam_relative_step;
    const auto r = biseld::vam::ComputeVam(g->graph, w->weights, input, opts);
    const auto out = g->graph.Forward(w->weights, input);

    const fs::path p(out_csv);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ostringstream csv;
    for (std::size_t t = 0; t < r.upscaled.dim(0); ++t) {
      for (std::size_t f = 0; f < r.upscaled.dim(1); ++f) {
        if (f) csv << ',';
        csv << Num(r.upscaled.data[t * r.upscaled.dim(1) + f]);
      }
      csv << '\n';
    }
    WriteText(p, csv.str());

    Json j;
    j["class"] = r.class_index;
    j["pivot"] = r.pivot;
    j["map_shape"] = r.map.shape;
    j["upscaled_shape"] = r.upscaled.shape;
    j["target"] = r.target;
    j["frame_norms"] = r.frame_norms;
    j["norm_kink"] = r.norm_kink;
    j["step"] = r.step;
    j["decoded"] = EventsJson(biseld::net::DecodeSequence(out, cfg->cfg.detection_threshold));
    fs::path side = p;
    side.replace_extension(".json");
    WriteText(side, j.dump(2) + "\n");
    j["outputs"] = Json::array({p.string(), side.string()});
    Emit(summary_json, j);
  });
}

biseld_status biseld_hz_to_mel(double hz, double* mel) {
  return Guard([&] {
    NonNull(mel, "mel");
    *mel = biseld::btff::HzToMel(hz);
  });
}

biseld_status biseld_mel_to_hz(double mel, double* hz) {
  return Guard([&] {
    NonNull(hz, "hz");
    *hz = biseld::btff::MelToHz(mel);
  });
}

biseld_status biseld_trinity_kernels(int c_out, int* b1, int* b2, int* b3, int* total_kernels) {
  return Guard([&] {
    if (c_out < 3) throw biseld::InvalidArgument("c_out must be at least 3");
    const auto a = biseld::net::TrinityAllocation(static_cast<std::size_t>(c_out));
    if (b1) *b1 = static_cast<int>(a.b1);
    if (b2) *b2 = static_cast<int>(a.b2);
    if (b3) *b3 = static_cast<int>(a.b3);
    if (total_kernels) *total_kernels = static_cast<int>(a.total_kernels);
  });
}

biseld_status biseld_itd(const double* left, const double* right, size_t n, double fs,
                         double* seconds) {
  return Guard([&] {
    NonNull(left, "left");
    NonNull(right, "right");
    NonNull(seconds, "seconds");
    biseld::hrtf::HrirPair p;
    p.left.assign(left, left + n);
    p.right.assign(right, right + n);
    p.fs = fs;
    *seconds = biseld::cues::Itd(p);
  });
}

biseld_status biseld_angular_error(double az1_deg, double el1_deg, double az2_deg,
                                   double el2_deg, double* degrees) {
  return Guard([&] {
    NonNull(degrees, "degrees");
    *degrees = biseld::metrics::AngularError(biseld::metrics::DirectionVector(az1_deg, el1_deg),
                                             biseld::metrics::DirectionVector(az2_deg, el2_deg));
  });
}

}  // extern "C"
