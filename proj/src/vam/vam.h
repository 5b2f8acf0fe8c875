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

#ifndef BISELD_VAM_VAM_H_
#define BISELD_VAM_VAM_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "net/graph.h"
#include "net/tensor.h"

namespace biseld::vam {

using net::Tensor;

// |v_c| for class c of one 36-wide output frame ([x..., y..., z...] layout).
double VectorNorm(std::span<const double> frame, std::size_t class_index);

// Maps a pivot activation to the network output, (T_out, 36).
using Tail = std::function<Tensor(const Tensor&)>;

// Sum over output frames of |v_c|.
double Target(const Tensor& output, std::size_t class_index);

struct Gradients {
  Tensor grad;               // same shape as the pivot activation
  bool norm_kink = false;    // some |v_c| vanished; the gradient there is one-sided
  double target = 0.0;       // target at the unperturbed pivot
};

// Central differences of Target(tail(P)) with respect to every pivot
// element. Evaluations run in parallel; the tail must be reentrant.
Gradients PivotGradientsFd(const Tail& tail, const Tensor& pivot,
                           std::size_t class_index, double step);

// Spatial mean of each channel of a (T, F, C) gradient map.
std::vector<double> GapWeights(const Tensor& grads);

// max(0, sum_k w_k P_k): a (T, F) map.
Tensor WeightedSumRelu(const Tensor& pivot, std::span<const double> weights);

// Bilinear resize of a (T, F) map with half-pixel centres and edge clamping.
Tensor Upscale(const Tensor& map, std::size_t rows, std::size_t cols);

struct VamResult {
  std::size_t class_index = 0;
  std::string pivot;
  Tensor map;       // (T_p, F_p)
  Tensor upscaled;  // (T, F) of the input
  double target = 0.0;
  std::vector<double> frame_norms;  // |v_c| per output frame
  bool norm_kink = false;
  double step = 0.0;
};

struct VamOptions {
  std::size_t class_index = 0;
  std::string pivot;          // empty: the graph's first declared pivot
  double relative_step = 1e-3;
};

VamResult ComputeVam(const net::Graph& g, const net::Weights& w, const Tensor& input,
                     const VamOptions& opts);

}  // namespace biseld::vam

#endif  // BISELD_VAM_VAM_H_
