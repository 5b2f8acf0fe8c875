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

#ifndef BISELD_NET_GRAPH_H_
#define BISELD_NET_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "net/tensor.h"
#include "net/weights.h"

namespace biseld::net {

enum class LayerKind {
  kInput,
  kDsepConv,
  kConv,
  kBatchNorm,
  kRelu,
  kTanh,
  kSigmoid,
  kMaxPool,
  kConcat,
  kAdd,
  kReshape,
  kGru,
  kDense,
};

const char* LayerKindName(LayerKind k);

struct LayerSpec {
  std::string name;
  LayerKind kind = LayerKind::kInput;
  std::vector<std::size_t> inputs;  // indices of earlier layers
  std::size_t filters = 0;          // conv / dense width, GRU units
  std::size_t kernel_t = 3;
  std::size_t kernel_f = 3;
  bool use_bias = true;
  std::size_t pool_t = 1;
  std::size_t pool_f = 1;
  bool bidirectional = true;
  double eps = 1e-3;
  Shape input_shape;  // kInput only: (F, C) or (D)
};

struct ParamCount {
  std::uint64_t trainable = 0;
  std::uint64_t non_trainable = 0;
  std::uint64_t total() const { return trainable + non_trainable; }
};

struct ArraySpec {
  std::string name;
  Shape shape;
  bool trainable = true;
};

// A validated, macro-expanded layer DAG. Layers are stored in evaluation
// order and every input refers to an earlier layer.
class Graph {
 public:
  // JSON document:
  //   {"name": ..., "layers": [{"name": ..., "kind": ..., ...}, ...],
  //    "output": <layer name>, "pivots": [<layer name>, ...]}
  // A layer reads the previous layer unless it names "input" or "inputs".
  // The "trinity" kind expands into its branch, concat, projection, add,
  // batch-norm and ReLU layers.
  static Graph FromJson(const std::string& json_text);
  static Graph Load(const std::string& path);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  const std::string& name() const { return name_; }
  std::size_t output_index() const { return output_; }
  const std::vector<std::string>& pivots() const { return pivots_; }
  std::size_t IndexOf(const std::string& layer_name) const;

  // Per-layer output shapes for an input with `frames` time steps.
  std::vector<Shape> InferShapes(std::size_t frames) const;
  // Smallest frame count that survives every time pooling.
  std::size_t MinFrames() const;

  // Closed-form per-layer parameter counts.
  ParamCount CountParams() const;
  // The same, per layer.
  std::vector<ParamCount> LayerParams() const;
  // Every parameter array the graph reads, in layer order.
  std::vector<ArraySpec> RequiredArrays() const;

  // Glorot-uniform kernels, zero biases, identity batch norm.
  Weights RandomWeights(std::uint64_t seed) const;
  // Checks that every required array is present with the right shape.
  void CheckWeights(const Weights& w) const;

  // Runs the graph; returns every layer's activation.
  std::vector<Tensor> ForwardAll(const Weights& w, const Tensor& input) const;
  Tensor Forward(const Weights& w, const Tensor& input) const;
  // Re-evaluates only the layers downstream of `pivot`, with its activation
  // replaced, and returns the output. Other layers come from `cache`.
  Tensor ForwardFrom(const Weights& w, const std::vector<Tensor>& cache,
                     std::size_t pivot, const Tensor& pivot_value) const;
  // True when layer `i` depends on layer `pivot` (or is it).
  std::vector<bool> Downstream(std::size_t pivot) const;

 private:
  Tensor Evaluate(const Weights& w, std::size_t i,
                  const std::vector<const Tensor*>& in) const;

  std::string name_;
  std::vector<LayerSpec> layers_;
  std::map<std::string, std::size_t> index_;
  std::size_t output_ = 0;
  std::vector<std::string> pivots_;
};

// JSON text of the default Trinity-module network for a T x 64 x 8 input.
std::string DefaultGraphJson();

}  // namespace biseld::net

#endif  // BISELD_NET_GRAPH_H_
