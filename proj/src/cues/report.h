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

#ifndef BISELD_CUES_REPORT_H_
#define BISELD_CUES_REPORT_H_

#include <cstddef>
#include <string>
#include <vector>

#include "cues/cues.h"

namespace biseld::cues {

struct AnalyzeOptions {
  ItdOptions itd;
  std::size_t ild_pad = 4800;
  double wideband_lo_hz = 20.0;
  double wideband_hi_hz = 20000.0;
  std::vector<double> narrowband_hz = {250, 500, 1000, 2000, 4000, 8000, 16000};
  double prtf_window_ms = 2.0;
  FeatureBand feature_band;
  double min_prominence_db = 3.0;
  std::vector<double> hpd_hz = {500, 1000, 2000, 4000, 8000, 16000};
};

struct AnalyzeSummary {
  std::size_t directions = 0;
  std::size_t median_directions = 0;
  std::size_t horizontal_directions = 0;
  std::vector<std::string> outputs;
};

// Writes itd.csv, ild.csv, sc.csv (median plane, both ears) and hpd.csv
// (horizontal plane, both ears) for a whole database into out_dir.
AnalyzeSummary AnalyzeDatabase(const std::vector<HrirPair>& db, const std::string& out_dir,
                               const AnalyzeOptions& opts = {});

}  // namespace biseld::cues

#endif  // BISELD_CUES_REPORT_H_
