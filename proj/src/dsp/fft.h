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

#ifndef BISELD_DSP_FFT_H_
#define BISELD_DSP_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace biseld::dsp {

using Complex = std::complex<double>;

// Full-length spectrum of a real or complex sequence. bins[0] is DC; bin k
// sits at k * fs / bins.size().
struct ComplexSpectrum {
  std::vector<Complex> bins;
  double fs = 0.0;

  std::size_t size() const { return bins.size(); }
  double bin_hz(std::size_t k) const {
    return static_cast<double>(k) * fs / static_cast<double>(bins.size());
  }
};

// Unnormalized DFT of x zero-padded to n_fft. Throws if n_fft < x.size().
// Any n_fft > 0 is accepted; powers of two are just faster.
ComplexSpectrum ForwardFft(std::span<const double> x, std::size_t n_fft,
                           double fs = 0.0);

// Inverse DFT scaled by 1/N; returns the real part.
std::vector<double> InverseFft(const ComplexSpectrum& s);

// Non-negative-frequency half (n_fft/2 + 1 bins) of the DFT of a real frame.
// `out` must hold n_fft/2 + 1 values; `frame` must hold exactly n_fft.
void RealFftHalf(std::span<const double> frame, std::span<Complex> out);

// Linear convolution truncated to `x.size()` samples (causal, anchored at
// h[0]), evaluated through zero-padded FFTs.
std::vector<double> ConvolveSame(std::span<const double> x,
                                 std::span<const double> h);

}  // namespace biseld::dsp

#endif  // BISELD_DSP_FFT_H_
