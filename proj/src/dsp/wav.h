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

#ifndef BISELD_DSP_WAV_H_
#define BISELD_DSP_WAV_H_

#include <string>
#include <vector>

namespace biseld::dsp {

// Planar audio: channels[c][n], values nominally in [-1, 1].
struct Audio {
  int fs = 0;
  std::vector<std::vector<double>> channels;

  std::size_t frames() const { return channels.empty() ? 0 : channels[0].size(); }
};

// Reads RIFF/WAVE with 16/24/32-bit integer PCM or 32-bit IEEE float data.
Audio ReadWav(const std::string& path);

// Writes 16-bit PCM. Samples are clamped to [-1, 1] and rounded.
void WriteWav16(const std::string& path, const Audio& audio);

}  // namespace biseld::dsp

#endif  // BISELD_DSP_WAV_H_
