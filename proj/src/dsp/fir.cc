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

#include "dsp/fir.h"

#include <cmath>
#include <numbers>

#include "common/error.h"

namespace biseld::dsp {

std::vector<double> DesignLowPass(std::size_t taps, double cutoff_hz,
                                  double fs) {
  if (taps % 2 == 0 || taps == 0) {
    throw InvalidArgument("low-pass tap count must be odd");
  }
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < fs / 2.0)) {
    throw InvalidArgument("low-pass cutoff must lie in (0, fs/2)");
  }
  const double pi = std::numbers::pi;
  const double wc = cutoff_hz / fs;  // cycles per sample
  const double mid = static_cast<double>(taps - 1) / 2.0;
  std::vector<double> h(taps);
  double sum = 0.0;
  for (std::size_t n = 0; n < taps; ++n) {
    const double t = static_cast<double>(n) - mid;
    const double sinc = t == 0.0 ? 2.0 * wc : std::sin(2.0 * pi * wc * t) / (pi * t);
    const double w =
        taps == 1 ? 1.0
                  : 0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(n) /
                                           static_cast<double>(taps - 1));
    h[n] = sinc * w;
    sum += h[n];
  }
  for (double& v : h) v /= sum;
  return h;
}

namespace {

// Centered convolution with a symmetric odd-length kernel (zero phase).
std::vector<double> CenteredConvolve(std::span<const double> x,
                                     std::span<const double> h) {
  const long n = static_cast<long>(x.size());
  const long half = static_cast<long>(h.size() / 2);
  std::vector<double> y(x.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    const long lo = std::max(0L, i - half);
    const long hi = std::min(n - 1, i + half);
    for (long j = lo; j <= hi; ++j) acc += x[j] * h[half + i - j];
    y[i] = acc;
  }
  return y;
}

}  // namespace

std::vector<double> FiltFilt(std::span<const double> x,
                             std::span<const double> h) {
  if (h.size() % 2 == 0) throw InvalidArgument("FiltFilt needs an odd kernel");
  // For a symmetric kernel, filtering forward then backward equals two
  // centered passes.
  std::vector<double> once = CenteredConvolve(x, h);
  return CenteredConvolve(once, h);
}

std::vector<double> Upsample(std::span<const double> x, std::size_t factor,
                             std::span<const double> anti_image) {
  if (factor == 0) throw InvalidArgument("upsampling factor must be positive");
  std::vector<double> stuffed(x.size() * factor, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    stuffed[i * factor] = x[i] * static_cast<double>(factor);
  }
  if (factor == 1) return stuffed;
  return FiltFilt(stuffed, anti_image);
}

std::vector<double> HannPeriodic(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

std::vector<double> HannSymmetric(std::size_t half) {
  const std::size_t n = 2 * half + 1;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) - static_cast<double>(half)) /
                     static_cast<double>(half + 1);
    w[i] = 0.5 + 0.5 * std::cos(std::numbers::pi * t);
  }
  return w;
}

}  // namespace biseld::dsp
