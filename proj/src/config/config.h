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

#ifndef BISELD_CONFIG_CONFIG_H_
#define BISELD_CONFIG_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "btff/btff.h"
#include "cues/report.h"
#include "dataset/synth.h"
#include "hrtf/database.h"
#include "metrics/metrics.h"
#include "speaker/speaker.h"

namespace biseld::config {

struct SpeakerRun {
  speaker::TspSet tsp;
  double v_eg = 2.828;      // V
  double v_box_cc = 800.0;  // cc
  double distance_m = 1.0;
  speaker::Air air;
  std::size_t points = 200;
  double f_lo_hz = 20.0;
  double f_hi_hz = 20000.0;
  double drop_db = 6.0;
  std::optional<double> ref_freq_hz;  // empty: referenced to the SPL peak
};

// Every tunable of the command-line tool. Missing keys keep these defaults;
// unknown keys are rejected with their dotted path.
struct ToolConfig {
  std::uint64_t seed = 2024;
  std::string hrir_dir;  // "paths.hrir_dir"
  std::size_t hrir_length = hrtf::kDefaultHrirLength;
  hrtf::DeriveOptions hrtf;
  cues::AnalyzeOptions cues;
  btff::StftParams stft;
  btff::BtffBands bands;
  bool standardize = false;
  dataset::SynthConfig synth;
  SpeakerRun speaker;
  metrics::EvalOptions metrics;
  double detection_threshold = 0.5;
  double vam_relative_step = 1e-3;

  void Validate() const;
  // `source` names the origin in error messages.
  static ToolConfig FromJson(const std::string& json_text,
                             const std::string& source = "config");
  static ToolConfig Load(const std::string& path);
  std::string ToJson() const;
  // Seed and HRIR directory propagated into the dataset settings.
  dataset::SynthConfig EffectiveSynth() const;
};

}  // namespace biseld::config

#endif  // BISELD_CONFIG_CONFIG_H_
