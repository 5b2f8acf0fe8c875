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

#ifndef BISELD_BTFF_MEL_H_
#define BISELD_BTFF_MEL_H_

#include <cstddef>
#include <span>
#include <vector>

namespace biseld::btff {

// m = 1127 ln(1 + f / 700). Both directions reject negative input.
double HzToMel(double hz);
double MelToHz(double mel);

// Triangular mel filterbank over the FFT bins [first_bin, last_bin] of an
// n_fft-point spectrum. Each row is a weighted average: nonnegative weights
// summing to 1. Rows whose triangle falls between two FFT bins interpolate
// linearly at their center frequency.
class MelBank {
 public:
  MelBank(std::size_t n_mel, double f_lo, double f_hi, std::size_t n_fft,
          double fs);

  std::size_t n_mel() const { return n_mel_; }
  std::size_t first_bin() const { return first_bin_; }
  std::size_t last_bin() const { return last_bin_; }
  std::size_t n_bins() const { return last_bin_ - first_bin_ + 1; }
  const std::vector<double>& center_hz() const { return center_hz_; }
  // Weight of band-relative FFT bin j in mel row i.
  double weight(std::size_t i, std::size_t j) const {
    return weights_[i * n_bins() + j];
  }

  // Applies the bank to a row-major T x n_bins() value matrix; returns
  // T x n_mel().
  std::vector<double> Apply(std::span<const double> values,
                            std::size_t frames) const;

 private:
  std::size_t n_mel_;
  std::size_t first_bin_;
  std::size_t last_bin_;
  std::vector<double> center_hz_;
  std::vector<double> weights_;
};

}  // namespace biseld::btff

#endif  // BISELD_BTFF_MEL_H_
