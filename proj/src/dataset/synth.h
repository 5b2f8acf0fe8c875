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

#ifndef BISELD_DATASET_SYNTH_H_
#define BISELD_DATASET_SYNTH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsp/wav.h"
#include "hrtf/hrtf.h"
#include "metrics/labels.h"

namespace biseld::dataset {

using metrics::LabelRow;

const std::vector<std::string>& DefaultClasses();

struct SynthConfig {
  int fs = 32000;
  std::vector<std::string> classes = DefaultClasses();
  int samples_per_class = 20;
  std::vector<int> split = {14, 3, 3};
  std::vector<int> azimuths = {0, 30, 60, 90, 120, 150, 180, 210, 240, 270, 300, 330};
  std::vector<int> elevations = {-30, 0, 30, 60};
  int segment_s = 5;
  int mixture_s = 60;
  std::optional<double> snr_db;
  // Empty: every noise class found in the noise directory.
  std::vector<std::string> noise_classes;
  std::uint64_t seed = 2024;
  std::string hrir_dir;
  int hrir_fs = 48000;
  double headroom_db = 1.0;

  int slots() const { return mixture_s / segment_s; }
  int frames_per_slot() const { return segment_s * 10; }
  void Validate() const;
  static SynthConfig FromJson(const std::string& json_text);
  std::string ToJson() const;
};

// Resampling to the dataset rate, same-length causal convolution through an
// HRIR pair, and SNR-controlled mixing.
std::vector<double> ToRate(std::span<const double> x, int fs_in, int fs_out);
std::array<std::vector<double>, 2> Spatialize(std::span<const double> mono,
                                              const hrtf::HrirPair& hrir, double fs);
// Scales the event so that its joint two-channel RMS sits snr_db above the
// noise's, and returns event * g + noise.
std::array<std::vector<double>, 2> MixAtSnr(const std::array<std::vector<double>, 2>& event,
                                            const std::array<std::vector<double>, 2>& noise,
                                            double snr_db, double* gain = nullptr);

// Onset/offset pairs in seconds, one per line; empty means active throughout.
std::vector<std::pair<double, double>> ReadActivity(const std::string& path);
// Deci-second frames of a slot that overlap the activity intervals.
std::vector<int> ActiveFrames(const std::vector<std::pair<double, double>>& activity,
                              int frames_per_slot);

struct ClipRef {
  int class_index = 0;
  std::string file;  // name inside the event directory
};

struct Placement {
  int slot = 0;
  ClipRef clip;
  hrtf::Direction direction;
};

struct MixturePlan {
  std::string split;   // train, valid, test, test_h, test_v
  std::string stem;    // file name without extension
  std::string noise;   // empty in clean mode
  std::size_t noise_file = 0;
  double noise_offset = 0.0;  // fraction of the usable noise length
  std::vector<Placement> placements;
};

struct Inventory {
  // Event file names per class, sorted.
  std::vector<std::vector<std::string>> clips;
  // Noise class -> sorted file names relative to the noise directory.
  std::map<std::string, std::vector<std::string>> noise;
};

// Lists <class><NN>.wav event files and noise files (<name>.wav or <name>/*.wav).
Inventory ScanInventory(const SynthConfig& cfg, const std::string& event_dir,
                        const std::string& noise_dir);

// The complete randomized plan. Pure function of the config and inventory.
std::vector<MixturePlan> BuildPlan(const SynthConfig& cfg, const Inventory& inv);

struct SplitCounts {
  std::map<std::string, std::size_t> files;
};
SplitCounts CountSplits(const std::vector<MixturePlan>& plan);

struct RenderedMixture {
  dsp::Audio audio;
  std::vector<LabelRow> labels;
  double scale = 1.0;
  std::vector<double> event_gains;  // per slot (1 in clean mode)
};

// One spatialized clip, in slot order.
struct SlotEvent {
  std::array<std::vector<double>, 2> audio;  // exactly one slot long
  int class_index = 0;
  hrtf::Direction direction;
  std::vector<std::pair<double, double>> activity;  // empty: whole slot
};

// Places twelve clips into consecutive slots, mixing each against the
// matching noise segment when snr_db is set. The result is unscaled.
RenderedMixture BuildMixture(const std::vector<SlotEvent>& events,
                             const std::array<std::vector<double>, 2>* noise,
                             std::optional<double> snr_db, int fs, int frames_per_slot);
// Scales the mixture so that its peak is at most -headroom_db dBFS.
void ApplyHeadroom(RenderedMixture& mix, double headroom_db);

// Loads HRIRs for every grid direction from cfg.hrir_dir.
std::map<std::pair<int, int>, hrtf::HrirPair> LoadHrirGrid(const SynthConfig& cfg);

struct DatasetResult {
  SplitCounts counts;
  std::string manifest_path;
};

// Renders the whole plan into out_dir/<split>/<stem>.{wav,csv} and writes
// out_dir/manifest.json.
DatasetResult BuildDataset(const SynthConfig& cfg, const std::string& event_dir,
                           const std::string& noise_dir, const std::string& out_dir);

}  // namespace biseld::dataset

#endif  // BISELD_DATASET_SYNTH_H_
