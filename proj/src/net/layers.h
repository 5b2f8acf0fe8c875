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

#ifndef BISELD_NET_LAYERS_H_
#define BISELD_NET_LAYERS_H_

#include <cstddef>
#include <vector>

#include "net/tensor.h"

namespace biseld::net {

// Kernel budget of a Trinity module. Branch k stacks k depthwise separable
// convolutions; widths inside a branch grow toward the branch output.
struct KernelAllocation {
  std::size_t b1 = 0, b2 = 0, b3 = 0;
  // Widths per branch in stacking order; zero-width stages included.
  std::vector<std::vector<std::size_t>> stages;
  std::size_t total_kernels = 0;
};

KernelAllocation TrinityAllocation(std::size_t c_out);

// Every op below takes (T, F, C) maps unless noted. Convolutions use "same"
// zero padding and stride 1.

// kernel: (kt, kf, C).
Tensor DepthwiseConv(const Tensor& x, const Tensor& kernel);
// kernel: (C, O); bias: (O) or empty.
Tensor PointwiseConv(const Tensor& x, const Tensor& kernel, const Tensor* bias);
Tensor DsepConv(const Tensor& x, const Tensor& depthwise, const Tensor& pointwise,
                const Tensor* bias);
// kernel: (kt, kf, C, O).
Tensor Conv2d(const Tensor& x, const Tensor& kernel, const Tensor* bias);

// Inference-mode batch normalization over the last axis.
Tensor BatchNorm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                 const Tensor& mean, const Tensor& variance, double eps);

Tensor Relu(const Tensor& x);
Tensor Tanh(const Tensor& x);
Tensor Sigmoid(const Tensor& x);

// Non-overlapping max pooling; trailing rows/columns that do not fill a
// window are dropped.
Tensor MaxPool(const Tensor& x, std::size_t pool_t, std::size_t pool_f);

// Concatenation along the last axis.
Tensor Concat(const std::vector<const Tensor*>& parts);
Tensor Add(const Tensor& a, const Tensor& b);
// (T, F, C) -> (T, F * C), row-major.
Tensor Flatten(const Tensor& x);

// Single-direction GRU over a (T, D) sequence. Gates are stacked [z | r | h]
// along the 3H axis of w (D, 3H), u (H, 3H) and b (3H):
//   z = sigmoid(x Wz + h Uz + bz)
//   r = sigmoid(x Wr + h Ur + br)
//   g = tanh(x Wh + (r * h) Uh + bh)
//   h' = z * h + (1 - z) * g
// `reverse` runs from the last step to the first; outputs stay aligned with
// the input time index.
Tensor Gru(const Tensor& x, const Tensor& w, const Tensor& u, const Tensor& b,
           bool reverse);

// (T, D) x (D, U) + bias.
Tensor Dense(const Tensor& x, const Tensor& kernel, const Tensor* bias);

}  // namespace biseld::net

#endif  // BISELD_NET_LAYERS_H_
