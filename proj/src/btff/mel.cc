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

#include "btff/mel.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"

namespace biseld::btff {

double HzToMel(double hz) {
  if (!(hz >= 0.0)) throw InvalidArgument("hz_to_mel: negative frequency");
  return 1127.0 * std::log1p(hz / 700.0);
}

double MelToHz(double mel) {
  if (!(mel >= 0.0)) throw InvalidArgument("mel_to_hz: negative mel value");
  return 700.0 * std::expm1(mel / 1127.0);
}

MelBank::MelBank(std::size_t n_mel, double f_lo, double f_hi, std::size_t n_fft,
                 double fs)
    : n_mel_(n_mel) {
  if (n_mel == 0 || n_fft < 2 || !(fs > 0.0)) {
    throw InvalidArgument("mel bank: need n_mel > 0, n_fft >= 2 and fs > 0");
  }
  if (!(f_lo >= 0.0) || !(f_hi > f_lo) || f_hi > fs / 2.0 + 1e-9) {
    throw InvalidArgument("mel bank: band must satisfy 0 <= f_lo < f_hi <= fs/2");
  }
  const double df = fs / static_cast<double>(n_fft);
  first_bin_ = static_cast<std::size_t>(std::ceil(f_lo / df - 1e-9));
  last_bin_ = std::min(static_cast<std::size_t>(std::floor(f_hi / df + 1e-9)),
                       n_fft / 2);
  if (last_bin_ <= first_bin_) throw InvalidArgument("mel bank: band holds < 2 FFT bins");
  const std::size_t nb = n_bins();

  const double m_lo = HzToMel(f_lo);
  const double m_hi = HzToMel(f_hi);
  std::vector<double> edges(n_mel + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = m_lo + (m_hi - m_lo) * static_cast<double>(i) /
                          static_cast<double>(n_mel + 1);
  }
  std::vector<double> bin_mel(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    bin_mel[j] = HzToMel(static_cast<double>(first_bin_ + j) * df);
  }

  weights_.assign(n_mel * nb, 0.0);
  center_hz_.resize(n_mel);
  for (std::size_t i = 0; i < n_mel; ++i) {
    const double lo = edges[i], c = edges[i + 1], hi = edges[i + 2];
    center_hz_[i] = MelToHz(c);
    double* row = &weights_[i * nb];
    double sum = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const double m = bin_mel[j];
      double w = 0.0;
      if (m <= c) {
        w = (i == 0) ? 1.0 : (m > lo ? (m - lo) / (c - lo) : 0.0);
      } else {
        w = (i + 1 == n_mel) ? 1.0 : (m < hi ? (hi - m) / (hi - c) : 0.0);
      }
      row[j] = w;
      sum += w;
    }
    if (sum == 0.0) {
      const double pos = (center_hz_[i] / df) - static_cast<double>(first_bin_);
      const double clamped = std::clamp(pos, 0.0, static_cast<double>(nb - 1));
      const auto j0 = std::min(static_cast<std::size_t>(clamped), nb - 2);
      const double a = clamped - static_cast<double>(j0);
      row[j0] = 1.0 - a;
      row[j0 + 1] = a;
      sum = 1.0;
    }
    for (std::size_t j = 0; j < nb; ++j) row[j] /= sum;
  }
}

std::vector<double> MelBank::Apply(std::span<const double> values,
                                   std::size_t frames) const {
  const std::size_t nb = n_bins();
  if (values.size() != frames * nb) {
    throw ShapeError("mel map: expected " + std::to_string(frames) + " x " +
                     std::to_string(nb) + " values, got " +
                     std::to_string(values.size()));
  }
  std::vector<double> out(frames * n_mel_, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* x = &values[t * nb];
    for (std::size_t i = 0; i < n_mel_; ++i) {
      const double* w = &weights_[i * nb];
      double acc = 0.0;
      for (std::size_t j = 0; j < nb; ++j) acc += w[j] * x[j];
      out[t * n_mel_ + i] = acc;
    }
  }
  return out;
}

}  // namespace biseld::btff
