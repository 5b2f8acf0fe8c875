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

#ifndef BISELD_HRTF_DATABASE_H_
#define BISELD_HRTF_DATABASE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrtf/hrtf.h"

namespace biseld::hrtf {

// Sorted paths of every a<AAA>e<+EE>.txt file in `dir`.
std::vector<std::string> ListHrirFiles(const std::string& dir);

// Loads every direction file of a database directory.
std::vector<HrirPair> LoadDatabase(const std::string& dir, double fs,
                                   std::size_t expected_length = kDefaultHrirLength);

struct DeriveOptions {
  double fs = 48000.0;
  WindowParams window;
  HeadGeometry geometry;
  std::optional<std::size_t> shift;  // default: MinCompensationShift
};

// Windowed BIR spectra divided by the windowed OIR spectrum, back to the time
// domain and circularly shifted.
HrirPair DeriveHrir(const HrirPair& bir, std::span<const double> oir,
                    std::size_t start_index, const DeriveOptions& opts,
                    std::size_t shift, bool* fallback = nullptr);

struct DeriveSummary {
  std::size_t files = 0;
  std::size_t start_index = 0;
  std::size_t shift = 0;
  std::vector<std::string> fallbacks;  // output files whose window kept the full tail
};

// Raw binaural responses in `bir_dir`, origin responses in `oir_path` (one
// column; a single file for every direction, or a directory holding
// e<+EE>.txt per elevation). Writes 2-column HRIR files to `out_dir`.
DeriveSummary DeriveDatabase(const std::string& bir_dir, const std::string& oir_path,
                             const std::string& out_dir, const DeriveOptions& opts);

}  // namespace biseld::hrtf

#endif  // BISELD_HRTF_DATABASE_H_
