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

#ifndef BISELD_METRICS_METRICS_H_
#define BISELD_METRICS_METRICS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "metrics/labels.h"

namespace biseld::metrics {

using Vec3 = std::array<double, 3>;

// Unit vector for an (azimuth, elevation) pair: x right, y front, z up.
Vec3 DirectionVector(double azimuth_deg, double elevation_deg);

// Great-circle angle 2 asin(|u - v| / 2) in degrees. Inputs are normalized.
double AngularError(const Vec3& u, const Vec3& v);

struct Event {
  int frame = 0;
  int class_index = 0;
  Vec3 direction{0.0, 1.0, 0.0};
};

std::vector<Event> EventsFromRows(const std::vector<LabelRow>& rows);

struct EvalOptions {
  int frames_per_segment = 10;
  double angle_threshold_deg = 20.0;
  int num_classes = 12;
  // Restricts every count to one class when set.
  std::optional<int> only_class;
};

struct SegmentCounts {
  int tp = 0, fp = 0, fn = 0, n = 0;
  int substitutions() const { return std::min(fn, fp); }
  int deletions() const { return std::max(0, fn - fp); }
  int insertions() const { return std::max(0, fp - fn); }
};

std::vector<SegmentCounts> CountSegments(const std::vector<Event>& ref,
                                         const std::vector<Event>& pred,
                                         const EvalOptions& opts = {});

// Running sums; scenes are pooled by adding their tallies.
struct Tally {
  long tp = 0, fp = 0, fn = 0, n = 0, sdi = 0;
  double le_sum = 0.0;
  long le_pairs = 0;
  long lr_tp = 0, lr_fn = 0;

  void Accumulate(const std::vector<Event>& ref, const std::vector<Event>& pred,
                  const EvalOptions& opts = {});
  Tally& operator+=(const Tally& o);
};

struct Composite {
  double sed = 0.0, doa = 0.0, seld = 0.0;
};

// SED = (ER + 1 - F) / 2, DOA = (LE / 180 + 1 - LR) / 2, SELD their mean.
Composite CompositeErrors(double er, double f, double le_deg, double lr);

struct MetricReport {
  std::optional<double> er;  // empty when no reference events exist
  std::optional<double> f;   // empty when nothing is active anywhere
  double le_deg = 180.0;
  bool le_defaulted = true;  // no class-matched pairs; LE set to 180
  std::optional<double> lr;  // empty when no reference frames exist
  std::optional<Composite> composite;
  Tally tally;
};

MetricReport Finalize(const Tally& t);

MetricReport Evaluate(const std::vector<Event>& ref, const std::vector<Event>& pred,
                      const EvalOptions& opts = {});

struct DirectoryReport {
  MetricReport overall;
  std::vector<MetricReport> per_class;
  std::vector<std::string> files;
  std::vector<std::string> missing_predictions;
};

// Pairs CSVs by file name; a reference without a prediction file is scored
// against an empty prediction.
DirectoryReport EvaluateDirectories(const std::string& ref_dir, const std::string& pred_dir,
                                    const EvalOptions& opts = {});

// JSON text of a directory report.
std::string ReportJson(const DirectoryReport& r, const std::vector<std::string>& class_names);

}  // namespace biseld::metrics

#endif  // BISELD_METRICS_METRICS_H_
