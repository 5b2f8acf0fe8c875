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

#include "dsp/resample.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "common/error.h"

namespace biseld::dsp {
namespace {

constexpr double kZeroCrossings = 24.0;
constexpr double kKaiserBeta = 8.6;
constexpr double kPassbandFraction = 0.94;

}  // namespace

std::vector<double> Resample(std::span<const double> x, int fs_in, int fs_out) {
  if (fs_in <= 0 || fs_out <= 0) {
    throw InvalidArgument("resample: sampling rates must be positive");
  }
  if (fs_in == fs_out) return std::vector<double>(x.begin(), x.end());

  const long g = std::gcd(fs_in, fs_out);
  const long up = fs_out / g;
  const long down = fs_in / g;
  const std::size_t out_len = static_cast<std::size_t>(std::llround(
      static_cast<double>(x.size()) * fs_out / static_cast<double>(fs_in)));

  // Prototype low-pass at the virtual rate up * fs_in, in cycles per
  // virtual sample.
  const double cutoff =
      kPassbandFraction * 0.5 * std::min(1.0, static_cast<double>(up) / down) /
      static_cast<double>(up);
  const long half = static_cast<long>(std::ceil(kZeroCrossings / (2.0 * cutoff)));
  const double i0_beta = std::cyl_bessel_i(0.0, kKaiserBeta);
  std::vector<double> h(2 * half + 1);
  for (long n = -half; n <= half; ++n) {
    const double t = static_cast<double>(n);
    const double sinc = n == 0 ? 2.0 * cutoff
                               : std::sin(2.0 * std::numbers::pi * cutoff * t) /
                                     (std::numbers::pi * t);
    const double r = t / static_cast<double>(half);
    const double kaiser =
        std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
        i0_beta;
    h[n + half] = sinc * kaiser * static_cast<double>(up);
  }

  std::vector<double> y(out_len, 0.0);
  const long n_in = static_cast<long>(x.size());
  for (std::size_t j = 0; j < out_len; ++j) {
    const long t = static_cast<long>(j) * down;  // virtual-rate position
    // Input k contributes where |t - k*up| <= half.
    long k_lo = (t - half + up - 1) / up;
    if (t - half < 0) k_lo = -((half - t) / up);
    const long k_hi = (t + half) / up;
    double acc = 0.0;
    for (long k = std::max(0L, k_lo); k <= std::min(n_in - 1, k_hi); ++k) {
      const long idx = t - k * up + half;
      if (idx >= 0 && idx < static_cast<long>(h.size())) acc += x[k] * h[idx];
    }
    y[j] = acc;
  }
  return y;
}

}  // namespace biseld::dsp
