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

#ifndef BISELD_NET_TENSOR_H_
#define BISELD_NET_TENSOR_H_

#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace biseld::net {

using Shape = std::vector<std::size_t>;

inline std::size_t NumElements(const Shape& s) {
  return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
}

std::string ShapeString(const Shape& s);

// Dense row-major tensor. Feature maps are (T, F, C); sequences are (T, D).
struct Tensor {
  Shape shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0)
      : shape(std::move(s)), data(NumElements(shape), fill) {}

  std::size_t rank() const { return shape.size(); }
  std::size_t dim(std::size_t i) const { return shape[i]; }
  std::size_t size() const { return data.size(); }
  // Last axis: channels for maps, features for sequences.
  std::size_t channels() const { return shape.back(); }
};

}  // namespace biseld::net

#endif  // BISELD_NET_TENSOR_H_
