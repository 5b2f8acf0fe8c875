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

#ifndef BISELD_NET_WEIGHTS_H_
#define BISELD_NET_WEIGHTS_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "net/tensor.h"

namespace biseld::net {

// Named parameter arrays. Values are held in double precision and stored on
// disk as float32.
class Weights {
 public:
  void Set(const std::string& name, Tensor value);
  bool Has(const std::string& name) const;
  // Throws when the array is missing or its shape differs from `expected`.
  const Tensor& Get(const std::string& name, const Shape& expected) const;
  const std::map<std::string, Tensor>& arrays() const { return arrays_; }

 private:
  std::map<std::string, Tensor> arrays_;
};

// Binary layout, little-endian: "BSWT", u32 version (1), u32 array count,
// then per array: u32 name length, name bytes, u32 dtype (0 = float32),
// u32 rank, u32 dims[rank], float32 data.
void SaveWeights(const std::string& path, const Weights& w);
Weights LoadWeights(const std::string& path);

}  // namespace biseld::net

#endif  // BISELD_NET_WEIGHTS_H_
