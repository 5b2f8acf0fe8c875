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

#ifndef BISELD_HRTF_HRTF_H_
#define BISELD_HRTF_HRTF_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dsp/fft.h"

namespace biseld::hrtf {

using dsp::Complex;
using dsp::ComplexSpectrum;

// Source direction in head coordinates: x toward the right ear, y to the
// front, z up. Azimuth is measured from the front toward the right ear.
struct Direction {
  double azimuth_deg = 0.0;    // (-180, 180]
  double elevation_deg = 0.0;  // [-90, 90]

  static Direction Normalized(double azimuth_deg, double elevation_deg);
};

struct HrirPair {
  std::vector<double> left;
  std::vector<double> right;
  double fs = 0.0;
  Direction direction;

  std::size_t size() const { return left.size(); }
  // Checks equal length, fs > 0 and finite samples; throws otherwise.
  void Validate() const;
  HrirPair Swapped() const;
};

struct WindowParams {
  double pre_peak_ms = 1.0;
  double min_post_peak_ms = 2.5;
  std::size_t pad_to = 512;
};

struct HeadGeometry {
  double head_radius_m = 0.0875;
  double speed_of_sound = 343.0;
};

struct WindowedIr {
  std::vector<double> samples;  // exactly pad_to long
  std::size_t end_index = 0;    // last kept sample, in input coordinates
  bool fallback = false;        // no zero crossing found; kept the full tail
};

constexpr std::size_t kDefaultHrirLength = 512;

// "a270e+30" or "a270e+30.txt" (directory prefixes are ignored).
Direction ParseHrirFilename(const std::string& name);
std::string FormatHrirFilename(const Direction& d);

// Two whitespace-separated columns per line: left, right. `expected_length`
// of 0 accepts any positive length.
HrirPair LoadHrirPair(const std::string& path, double fs, const Direction& d,
                      std::size_t expected_length = kDefaultHrirLength);
// Same, with the direction taken from the file name.
HrirPair LoadHrirPair(const std::string& path, double fs,
                      std::size_t expected_length = kDefaultHrirLength);
void SaveHrirPair(const std::string& path, const HrirPair& pair);

// One number per line; used for raw OIR files.
std::vector<double> LoadColumn(const std::string& path);

// Index of the maximum-magnitude sample (first one on ties).
std::size_t PeakIndex(std::span<const double> x);

// Global window start: `pre_peak_ms` before the earlier of the two ipsilateral
// 90-degree peaks. Clamped at 0.
std::size_t WindowStartIndex(std::span<const double> ipsi_left,
                             std::span<const double> ipsi_right, double fs,
                             double pre_peak_ms);

// Cuts [start_index, end] where end is the first zero-crossing sample more
// than min_post_peak_ms after this IR's peak, then zero-pads to pad_to.
WindowedIr ApplyTimeWindow(std::span<const double> ir, double fs,
                           std::size_t start_index, const WindowParams& params);

// H = G / G0 per bin. Throws naming the first bin where |G0| falls below
// 1e-12 * max|G0|.
ComplexSpectrum DeriveHrtf(const ComplexSpectrum& btf, const ComplexSpectrum& otf);

// Largest lead of the ipsilateral ear over the head center, l / c.
double MaxNoncausalDelay(const HeadGeometry& geom);
// Smallest integer shift m with m > tau_max * fs.
std::size_t MinCompensationShift(const HeadGeometry& geom, double fs);

// out[n] = in[(n - shift) mod N].
std::vector<double> CompensateNoncausality(std::span<const double> hrir,
                                           std::size_t shift);

}  // namespace biseld::hrtf

#endif  // BISELD_HRTF_HRTF_H_
