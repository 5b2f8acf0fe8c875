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

#include "net/decode.h"

#include <cmath>
#include <numbers>

#include "common/error.h"

namespace biseld::net {

std::vector<DecodedEvent> DecodeOutput(std::span<const double> frame, double threshold) {
  if (frame.size() != kOutputWidth) {
    throw ShapeError("decode: expected 36 values, got " + std::to_string(frame.size()));
  }
  constexpr double kDeg = 180.0 / std::numbers::pi;
  std::vector<DecodedEvent> events;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const double x = frame[c], y = frame[kNumClasses + c], z = frame[2 * kNumClasses + c];
    const double mag = std::sqrt(x * x + y * y + z * z);
    if (!(mag > threshold)) continue;
    const double horizontal = std::hypot(x, y);
    DecodedEvent e;
    e.class_index = c;
    e.azimuth_deg = (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(x, y) * kDeg;
    e.elevation_deg = std::atan2(z, horizontal) * kDeg;
    e.magnitude = mag;
    events.push_back(e);
  }
  return events;
}

std::vector<FrameEvent> DecodeSequence(const Tensor& output, double threshold) {
  if (output.rank() != 2 || output.dim(1) != kOutputWidth) {
    throw ShapeError("decode: expected a (T, 36) output, got " + ShapeString(output.shape));
  }
  std::vector<FrameEvent> out;
  for (std::size_t t = 0; t < output.dim(0); ++t) {
    const std::span<const double> row(&output.data[t * kOutputWidth], kOutputWidth);
    for (const DecodedEvent& e : DecodeOutput(row, threshold)) out.push_back({t, e});
  }
  return out;
}

}  // namespace biseld::net
