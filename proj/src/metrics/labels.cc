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

#include "metrics/labels.h"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "common/error.h"

namespace biseld::metrics {
namespace {

constexpr int kNumClasses = 12;

bool ParseInt(std::string_view s, int& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

void SortRows(std::vector<LabelRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const LabelRow& a, const LabelRow& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.class_index < b.class_index;
  });
}

std::vector<LabelRow> ReadLabels(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::vector<LabelRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    int v[4];
    std::size_t start = 0;
    int n = 0;
    for (; n < 5; ++n) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field =
          std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
      if (n == 4) throw ParseError(path, line_no, "expected 4 columns");
      if (!ParseInt(field, v[n])) {
        throw ParseError(path, line_no, "column " + std::to_string(n + 1) + " is not an integer");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (n != 3) throw ParseError(path, line_no, "expected 4 columns");
    if (v[0] < 0) throw ParseError(path, line_no, "negative frame index");
    if (v[1] < 0 || v[1] >= kNumClasses) throw ParseError(path, line_no, "class out of range");
    if (v[2] <= -180 || v[2] > 180) throw ParseError(path, line_no, "azimuth outside (-180, 180]");
    if (v[3] < -90 || v[3] > 90) throw ParseError(path, line_no, "elevation outside [-90, 90]");
    rows.push_back({v[0], v[1], v[2], v[3]});
  }
  return rows;
}

void WriteLabels(const std::string& path, const std::vector<LabelRow>& rows) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  for (const LabelRow& r : rows) {
    os << r.frame << ',' << r.class_index << ',' << r.azimuth_deg << ',' << r.elevation_deg
       << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace biseld::metrics
