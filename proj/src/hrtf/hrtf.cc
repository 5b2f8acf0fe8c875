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

#include "hrtf/hrtf.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "common/error.h"

namespace biseld::hrtf {

Direction Direction::Normalized(double azimuth_deg, double elevation_deg) {
  double az = std::fmod(azimuth_deg, 360.0);
  if (az <= -180.0) az += 360.0;
  if (az > 180.0) az -= 360.0;
  return Direction{az, std::clamp(elevation_deg, -90.0, 90.0)};
}

void HrirPair::Validate() const {
  if (left.size() != right.size()) {
    throw InvalidArgument("HRIR pair has unequal channel lengths (" +
                          std::to_string(left.size()) + " vs " +
                          std::to_string(right.size()) + ")");
  }
  if (!(fs > 0.0)) throw InvalidArgument("HRIR pair needs fs > 0");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(left.begin(), left.end(), finite) ||
      !std::all_of(right.begin(), right.end(), finite)) {
    throw InvalidArgument("HRIR pair contains non-finite samples");
  }
}

HrirPair HrirPair::Swapped() const {
  HrirPair s = *this;
  std::swap(s.left, s.right);
  return s;
}

Direction ParseHrirFilename(const std::string& name) {
  static const std::regex kPattern(R"(^a([0-9]{3})e([+-])([0-9]{2})(\.txt)?$)");
  const std::string base = std::filesystem::path(name).filename().string();
  std::smatch m;
  if (!std::regex_match(base, m, kPattern)) {
    throw InvalidArgument("not an HRIR file name (expected a<AAA>e<+-EE>): " + name);
  }
  const int az = std::stoi(m[1].str());
  if (az > 359) throw InvalidArgument("HRIR azimuth out of [000, 359]: " + name);
  const int el = std::stoi(m[3].str()) * (m[2].str() == "-" ? -1 : 1);
  return Direction::Normalized(az, el);
}

std::string FormatHrirFilename(const Direction& d) {
  long az = std::lround(d.azimuth_deg);
  az = ((az % 360) + 360) % 360;
  const long el = std::lround(d.elevation_deg);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "a%03lde%c%02ld.txt", az, el < 0 ? '-' : '+',
                std::labs(el));
  return buf;
}

namespace {

// Parses whitespace-separated doubles; returns false on any junk token.
bool ParseNumbers(const std::string& line, std::vector<double>& out) {
  out.clear();
  const char* p = line.c_str();
  for (;;) {
    while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
    if (*p == '\0') return true;
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p) return false;
    if (*end != '\0' && *end != ' ' && *end != '\t' && *end != '\r') return false;
    out.push_back(v);
    p = end;
  }
}

}  // namespace

HrirPair LoadHrirPair(const std::string& path, double fs, const Direction& d,
                      std::size_t expected_length) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open HRIR file " + path);
  HrirPair pair;
  pair.fs = fs;
  pair.direction = d;
  std::string line;
  std::vector<double> nums;
  std::size_t line_no = 0;
  std::size_t trailing_blank = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!ParseNumbers(line, nums)) {
      throw ParseError(path, line_no, "malformed number");
    }
    if (nums.empty()) {
      ++trailing_blank;
      continue;
    }
    if (trailing_blank > 0) {
      throw ParseError(path, line_no - 1, "blank line inside sample data");
    }
    if (nums.size() != 2) {
      throw ParseError(path, line_no,
                       "expected 2 columns, found " + std::to_string(nums.size()));
    }
    pair.left.push_back(nums[0]);
    pair.right.push_back(nums[1]);
  }
  if (pair.left.empty()) throw Error(ErrorKind::kParse, path + ": empty HRIR file");
  if (expected_length != 0 && pair.left.size() != expected_length) {
    throw Error(ErrorKind::kParse,
                path + ": expected " + std::to_string(expected_length) +
                    " samples, found " + std::to_string(pair.left.size()) +
                    (pair.left.size() < expected_length ? " (short file)" : ""));
  }
  pair.Validate();
  return pair;
}

HrirPair LoadHrirPair(const std::string& path, double fs,
                      std::size_t expected_length) {
  return LoadHrirPair(path, fs, ParseHrirFilename(path), expected_length);
}

void SaveHrirPair(const std::string& path, const HrirPair& pair) {
  pair.Validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write HRIR file " + path);
  char buf[64];
  for (std::size_t i = 0; i < pair.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9e %.9e\n", pair.left[i], pair.right[i]);
    out << buf;
  }
  if (!out) throw IoError("short write to " + path);
}

std::vector<double> LoadColumn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<double> x, nums;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!ParseNumbers(line, nums)) throw ParseError(path, line_no, "malformed number");
    if (nums.empty()) continue;
    if (nums.size() != 1) {
      throw ParseError(path, line_no,
                       "expected 1 column, found " + std::to_string(nums.size()));
    }
    x.push_back(nums[0]);
  }
  if (x.empty()) throw Error(ErrorKind::kParse, path + ": empty file");
  return x;
}

std::size_t PeakIndex(std::span<const double> x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i]) > std::abs(x[best])) best = i;
  }
  return best;
}

std::size_t WindowStartIndex(std::span<const double> ipsi_left,
                             std::span<const double> ipsi_right, double fs,
                             double pre_peak_ms) {
  const std::size_t peak = std::min(PeakIndex(ipsi_left), PeakIndex(ipsi_right));
  const auto pre = static_cast<std::size_t>(std::llround(pre_peak_ms * 1e-3 * fs));
  return peak > pre ? peak - pre : 0;
}

WindowedIr ApplyTimeWindow(std::span<const double> ir, double fs,
                           std::size_t start_index, const WindowParams& params) {
  if (ir.empty()) throw InvalidArgument("time window: empty impulse response");
  if (start_index >= ir.size()) {
    throw InvalidArgument("time window: start index " + std::to_string(start_index) +
                          " beyond IR length " + std::to_string(ir.size()));
  }
  if (!(params.pre_peak_ms > 0.0) || !(params.min_post_peak_ms > 0.0)) {
    throw InvalidArgument("time window: durations must be positive");
  }
  const std::size_t peak = PeakIndex(ir);
  const auto min_post =
      static_cast<std::size_t>(std::floor(params.min_post_peak_ms * 1e-3 * fs + 1e-9));
  WindowedIr out;
  out.end_index = ir.size() - 1;
  out.fallback = true;
  for (std::size_t n = peak + min_post + 1; n < ir.size(); ++n) {
    const bool crossing = ir[n] == 0.0 || (ir[n] > 0.0) != (ir[n - 1] > 0.0);
    if (crossing) {
      out.end_index = n;
      out.fallback = false;
      break;
    }
  }
  if (out.end_index < start_index) {
    throw InvalidArgument("time window: window end precedes start index");
  }
  const std::size_t len = out.end_index - start_index + 1;
  if (len > params.pad_to) {
    throw InvalidArgument("time window: segment of " + std::to_string(len) +
                          " samples exceeds pad_to " + std::to_string(params.pad_to));
  }
  out.samples.assign(params.pad_to, 0.0);
  std::copy(ir.begin() + static_cast<long>(start_index),
            ir.begin() + static_cast<long>(out.end_index) + 1, out.samples.begin());
  return out;
}

ComplexSpectrum DeriveHrtf(const ComplexSpectrum& btf, const ComplexSpectrum& otf) {
  if (btf.size() != otf.size()) {
    throw InvalidArgument("derive_hrtf: bin count mismatch (" +
                          std::to_string(btf.size()) + " vs " +
                          std::to_string(otf.size()) + ")");
  }
  if (btf.fs != otf.fs) throw InvalidArgument("derive_hrtf: sampling rate mismatch");
  double max_mag = 0.0;
  for (const Complex& c : otf.bins) max_mag = std::max(max_mag, std::abs(c));
  const double eps = 1e-12 * max_mag;
  ComplexSpectrum h;
  h.fs = btf.fs;
  h.bins.resize(btf.size());
  for (std::size_t k = 0; k < btf.size(); ++k) {
    if (!(std::abs(otf.bins[k]) > eps)) {
      throw DomainError("derive_hrtf: OTF magnitude near zero at bin " +
                        std::to_string(k));
    }
    h.bins[k] = btf.bins[k] / otf.bins[k];
  }
  return h;
}

double MaxNoncausalDelay(const HeadGeometry& geom) {
  if (!(geom.head_radius_m >= 0.0) || !(geom.speed_of_sound > 0.0)) {
    throw InvalidArgument("head geometry: radius must be >= 0 and c > 0");
  }
  return geom.head_radius_m / geom.speed_of_sound;
}

std::size_t MinCompensationShift(const HeadGeometry& geom, double fs) {
  return static_cast<std::size_t>(std::floor(MaxNoncausalDelay(geom) * fs)) + 1;
}

std::vector<double> CompensateNoncausality(std::span<const double> hrir,
                                           std::size_t shift) {
  const std::size_t n = hrir.size();
  if (n == 0 || shift >= n) {
    throw InvalidArgument("compensate_noncausality: shift " + std::to_string(shift) +
                          " out of range for length " + std::to_string(n));
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[(i + shift) % n] = hrir[i];
  return out;
}

}  // namespace biseld::hrtf
