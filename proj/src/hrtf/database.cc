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

#include "hrtf/database.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <regex>

#include "common/error.h"
#include "common/parallel.h"

namespace biseld::hrtf {
namespace {

namespace fs = std::filesystem;

bool IsHrirName(const std::string& name) {
  static const std::regex re("^a[0-9]{3}e[+-][0-9]{2}\\.txt$");
  return std::regex_match(name, re);
}

}  // namespace

std::vector<std::string> ListHrirFiles(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && IsHrirName(e.path().filename().string())) {
      out.push_back(e.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw InvalidArgument("no a<AAA>e<+EE>.txt files in " + dir);
  return out;
}

std::vector<HrirPair> LoadDatabase(const std::string& dir, double fs,
                                   std::size_t expected_length) {
  const auto files = ListHrirFiles(dir);
  std::vector<HrirPair> out(files.size());
  ParallelFor(files.size(),
              [&](std::size_t i) { out[i] = LoadHrirPair(files[i], fs, expected_length); });
  return out;
}

HrirPair DeriveHrir(const HrirPair& bir, std::span<const double> oir,
                    std::size_t start_index, const DeriveOptions& opts, std::size_t shift,
                    bool* fallback) {
  bir.Validate();
  const std::size_t n = opts.window.pad_to;
  const WindowedIr wl = ApplyTimeWindow(bir.left, bir.fs, start_index, opts.window);
  const WindowedIr wr = ApplyTimeWindow(bir.right, bir.fs, start_index, opts.window);
  const WindowedIr wo = ApplyTimeWindow(oir, bir.fs, start_index, opts.window);
  if (fallback) *fallback = wl.fallback || wr.fallback || wo.fallback;
  const ComplexSpectrum g0 = dsp::ForwardFft(wo.samples, n, bir.fs);
  HrirPair out;
  out.fs = bir.fs;
  out.direction = bir.direction;
  out.left = CompensateNoncausality(
      dsp::InverseFft(DeriveHrtf(dsp::ForwardFft(wl.samples, n, bir.fs), g0)), shift);
  out.right = CompensateNoncausality(
      dsp::InverseFft(DeriveHrtf(dsp::ForwardFft(wr.samples, n, bir.fs), g0)), shift);
  return out;
}

DeriveSummary DeriveDatabase(const std::string& bir_dir, const std::string& oir_path,
                             const std::string& out_dir, const DeriveOptions& opts) {
  if (!(opts.fs > 0.0)) throw InvalidArgument("derive: fs must be positive");
  const std::vector<HrirPair> birs = LoadDatabase(bir_dir, opts.fs, 0);

  // Origin responses keyed by elevation; a single file serves every key.
  std::map<int, std::vector<double>> oirs;
  const bool per_elevation = fs::is_directory(oir_path);
  std::vector<double> shared;
  if (!per_elevation) shared = LoadColumn(oir_path);
  for (const auto& b : birs) {
    const int el = static_cast<int>(std::lround(b.direction.elevation_deg));
    if (!per_elevation || oirs.count(el)) continue;
    char name[16];
    std::snprintf(name, sizeof name, "e%+03d.txt", el);
    const fs::path p = fs::path(oir_path) / name;
    if (!fs::exists(p)) throw IoError("missing origin response " + p.string());
    oirs[el] = LoadColumn(p.string());
  }
  auto oir_for = [&](const HrirPair& b) -> const std::vector<double>& {
    return per_elevation ? oirs.at(static_cast<int>(std::lround(b.direction.elevation_deg)))
                         : shared;
  };

  // Global start: before the earliest ipsilateral peak of the lateral
  // directions, or of every direction when none is lateral.
  std::size_t earliest = SIZE_MAX;
  for (const auto& b : birs) {
    const double az = b.direction.azimuth_deg;
    if (std::fabs(std::fabs(az) - 90.0) > 1e-9) continue;
    earliest = std::min(earliest, PeakIndex(az > 0 ? b.right : b.left));
  }
  if (earliest == SIZE_MAX) {
    for (const auto& b : birs) earliest = std::min({earliest, PeakIndex(b.left), PeakIndex(b.right)});
  }
  const auto pre = static_cast<std::size_t>(std::lround(opts.window.pre_peak_ms * 1e-3 * opts.fs));

  DeriveSummary summary;
  summary.files = birs.size();
  summary.start_index = earliest > pre ? earliest - pre : 0;
  summary.shift = opts.shift ? *opts.shift : MinCompensationShift(opts.geometry, opts.fs);
  if (summary.shift >= opts.window.pad_to) {
    throw InvalidArgument("derive: shift must be smaller than pad_to");
  }

  fs::create_directories(out_dir);
  std::vector<char> flagged(birs.size(), 0);
  std::vector<std::string> names(birs.size());
  ParallelFor(birs.size(), [&](std::size_t i) {
    bool fb = false;
    const HrirPair h =
        DeriveHrir(birs[i], oir_for(birs[i]), summary.start_index, opts, summary.shift, &fb);
    names[i] = FormatHrirFilename(birs[i].direction);
    SaveHrirPair((fs::path(out_dir) / names[i]).string(), h);
    flagged[i] = fb;
  });
  for (std::size_t i = 0; i < birs.size(); ++i) {
    if (flagged[i]) summary.fallbacks.push_back(names[i]);
  }
  return summary;
}

}  // namespace biseld::hrtf
