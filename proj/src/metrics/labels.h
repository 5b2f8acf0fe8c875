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

#ifndef BISELD_METRICS_LABELS_H_
#define BISELD_METRICS_LABELS_H_

#include <string>
#include <vector>

namespace biseld::metrics {

// One row of a label or prediction CSV: deci-second frame index, class
// index, azimuth and elevation in integer degrees.
struct LabelRow {
  int frame = 0;
  int class_index = 0;
  int azimuth_deg = 0;
  int elevation_deg = 0;

  friend bool operator==(const LabelRow&, const LabelRow&) = default;
};

// Rows sorted by frame, then class.
void SortRows(std::vector<LabelRow>& rows);

// "frame,class,azimuth,elevation" without a header. Blank lines are skipped;
// malformed lines raise a parse error naming the line.
std::vector<LabelRow> ReadLabels(const std::string& path);
void WriteLabels(const std::string& path, const std::vector<LabelRow>& rows);

}  // namespace biseld::metrics

#endif  // BISELD_METRICS_LABELS_H_
