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

#ifndef BISELD_DSP_FIR_H_
#define BISELD_DSP_FIR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace biseld::dsp {

// Linear-phase windowed-sinc low-pass (Hamming window), unity DC gain.
// `taps` must be odd so the filter has an integer group delay.
std::vector<double> DesignLowPass(std::size_t taps, double cutoff_hz,
                                  double fs);

// Forward-backward application of a symmetric FIR: the result has zero phase
// and the squared magnitude response. Output length equals input length;
// the signal is treated as zero outside its support.
std::vector<double> FiltFilt(std::span<const double> x,
                             std::span<const double> h);

// Zero-stuffing upsampler followed by the zero-phase anti-image low-pass.
// The gain is restored by `factor`.
std::vector<double> Upsample(std::span<const double> x, std::size_t factor,
                             std::span<const double> anti_image);

// Periodic raised-cosine (Hann) window of length n.
std::vector<double> HannPeriodic(std::size_t n);

// Symmetric Hann window of odd length 2*half+1 with unit center weight.
std::vector<double> HannSymmetric(std::size_t half);

}  // namespace biseld::dsp

#endif  // BISELD_DSP_FIR_H_
