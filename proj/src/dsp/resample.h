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

#ifndef BISELD_DSP_RESAMPLE_H_
#define BISELD_DSP_RESAMPLE_H_

#include <span>
#include <vector>

namespace biseld::dsp {

// Band-limited rational resampler (polyphase Kaiser-windowed sinc). The
// output has round(len * fs_out / fs_in) samples. Equal rates return the
// input untouched.
std::vector<double> Resample(std::span<const double> x, int fs_in, int fs_out);

}  // namespace biseld::dsp

#endif  // BISELD_DSP_RESAMPLE_H_
