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

#ifndef BISELD_NET_DECODE_H_
#define BISELD_NET_DECODE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "net/tensor.h"

namespace biseld::net {

constexpr std::size_t kNumClasses = 12;
constexpr std::size_t kOutputWidth = 3 * kNumClasses;

struct DecodedEvent {
  std::size_t class_index = 0;
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  double magnitude = 0.0;
};

// One output frame laid out as [x_0..x_11, y_0..y_11, z_0..z_11]: x toward
// the right ear, y to the front, z up. A class is active when its vector is
// longer than `threshold`.
std::vector<DecodedEvent> DecodeOutput(std::span<const double> frame,
                                       double threshold = 0.5);

struct FrameEvent {
  std::size_t frame = 0;
  DecodedEvent event;
};

// Decodes every row of a (T, 36) network output.
std::vector<FrameEvent> DecodeSequence(const Tensor& output, double threshold = 0.5);

}  // namespace biseld::net

#endif  // BISELD_NET_DECODE_H_
