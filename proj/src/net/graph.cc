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

#include "net/graph.h"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "common/error.h"
#include "json.hpp"
#include "net/layers.h"

namespace biseld::net {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kNominalFrames = std::size_t{1} << 20;

struct KindInfo {
  const char* name;
  LayerKind kind;
  std::set<std::string> keys;  // allowed besides name/kind/input/inputs
};

const std::vector<KindInfo>& Kinds() {
  static const std::vector<KindInfo> kinds = {
      {"input", LayerKind::kInput, {"shape"}},
      {"dsep_conv", LayerKind::kDsepConv, {"filters", "kernel", "use_bias"}},
      {"conv", LayerKind::kConv, {"filters", "kernel", "use_bias"}},
      {"batch_norm", LayerKind::kBatchNorm, {"eps"}},
      {"relu", LayerKind::kRelu, {}},
      {"tanh", LayerKind::kTanh, {}},
      {"sigmoid", LayerKind::kSigmoid, {}},
      {"max_pool", LayerKind::kMaxPool, {"pool"}},
      {"concat", LayerKind::kConcat, {}},
      {"add", LayerKind::kAdd, {}},
      {"reshape", LayerKind::kReshape, {}},
      {"gru", LayerKind::kGru, {"units", "bidirectional"}},
      {"dense", LayerKind::kDense, {"units", "use_bias"}},
  };
  return kinds;
}

std::size_t PositiveSize(const Json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw InvalidArgument("graph: " + what + " must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::pair<std::size_t, std::size_t> SizePair(const Json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2) {
    throw InvalidArgument("graph: " + what + " must be a two-element array");
  }
  return {PositiveSize(v[0], what), PositiveSize(v[1], what)};
}

Shape OutputShape(const LayerSpec& l, const std::vector<const Shape*>& in,
                  std::size_t frames) {
  auto need_rank = [&](std::size_t rank) {
    if (in[0]->size() != rank) {
      throw ShapeError("graph: layer " + l.name + " expects rank-" + std::to_string(rank) +
                       " input, got " + ShapeString(*in[0]));
    }
  };
  switch (l.kind) {
    case LayerKind::kInput: {
      Shape s{frames};
      s.insert(s.end(), l.input_shape.begin(), l.input_shape.end());
      return s;
    }
    case LayerKind::kDsepConv:
    case LayerKind::kConv:
      need_rank(3);
      return {(*in[0])[0], (*in[0])[1], l.filters};
    case LayerKind::kBatchNorm:
    case LayerKind::kRelu:
    case LayerKind::kTanh:
    case LayerKind::kSigmoid:
      return *in[0];
    case LayerKind::kMaxPool: {
      need_rank(3);
      const Shape s{(*in[0])[0] / l.pool_t, (*in[0])[1] / l.pool_f, (*in[0])[2]};
      if (s[0] == 0 || s[1] == 0) {
        throw ShapeError("graph: layer " + l.name + " pools " + ShapeString(*in[0]) +
                         " to an empty map");
      }
      return s;
    }
    case LayerKind::kConcat: {
      Shape s = *in[0];
      s.back() = 0;
      for (const Shape* p : in) {
        if (p->size() != s.size() || !std::equal(s.begin(), s.end() - 1, p->begin())) {
          throw ShapeError("graph: concat " + l.name + " has incompatible inputs");
        }
        s.back() += p->back();
      }
      return s;
    }
    case LayerKind::kAdd:
      for (const Shape* p : in) {
        if (*p != *in[0]) throw ShapeError("graph: add " + l.name + " has mismatched inputs");
      }
      return *in[0];
    case LayerKind::kReshape:
      need_rank(3);
      return {(*in[0])[0], (*in[0])[1] * (*in[0])[2]};
    case LayerKind::kGru:
      need_rank(2);
      return {(*in[0])[0], l.filters * (l.bidirectional ? 2 : 1)};
    case LayerKind::kDense:
      need_rank(2);
      return {(*in[0])[0], l.filters};
  }
  throw InvalidArgument("graph: unknown layer kind");
}

class Builder {
 public:
  std::size_t Add(LayerSpec l) {
    if (l.name.empty()) throw InvalidArgument("graph: layer without a name");
    if (index_.count(l.name)) throw InvalidArgument("graph: duplicate layer name " + l.name);
    std::vector<const Shape*> in;
    for (std::size_t i : l.inputs) in.push_back(&shapes_[i]);
    if (l.kind != LayerKind::kInput && in.empty()) {
      throw InvalidArgument("graph: layer " + l.name + " has no input");
    }
    if ((l.kind == LayerKind::kAdd || l.kind == LayerKind::kConcat) ? in.size() < 2
        : l.kind != LayerKind::kInput && in.size() != 1) {
      throw InvalidArgument("graph: layer " + l.name + " has the wrong number of inputs");
    }
    shapes_.push_back(OutputShape(l, in, kNominalFrames));
    index_[l.name] = layers_.size();
    layers_.push_back(std::move(l));
    return layers_.size() - 1;
  }

  std::size_t Resolve(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) throw InvalidArgument("graph: unknown layer reference " + name);
    return it->second;
  }

  std::size_t channels(std::size_t i) const { return shapes_[i].back(); }

  std::vector<LayerSpec> layers_;
  std::vector<Shape> shapes_;
  std::map<std::string, std::size_t> index_;
};

void ExpandTrinity(Builder& b, const std::string& name, std::size_t input,
                   std::size_t filters, const std::string& concat_name) {
  const KernelAllocation alloc = TrinityAllocation(filters);
  std::vector<std::size_t> branch_outputs;
  for (std::size_t br = 0; br < alloc.stages.size(); ++br) {
    std::size_t prev = input;
    for (std::size_t st = 0; st < alloc.stages[br].size(); ++st) {
      const std::size_t width = alloc.stages[br][st];
      if (width == 0) continue;
      LayerSpec l;
      l.name = name + "/b" + std::to_string(br + 1) + "_" + std::to_string(st);
      l.kind = LayerKind::kDsepConv;
      l.filters = width;
      l.inputs = {prev};
      prev = b.Add(l);
    }
    branch_outputs.push_back(prev);
  }
  LayerSpec cat;
  cat.name = concat_name.empty() ? name + "/concat" : concat_name;
  cat.kind = LayerKind::kConcat;
  cat.inputs = branch_outputs;
  const std::size_t cat_i = b.Add(cat);

  std::size_t skip = input;
  if (b.channels(input) != filters) {
    LayerSpec proj;
    proj.name = name + "/proj";
    proj.kind = LayerKind::kConv;
    proj.filters = filters;
    proj.kernel_t = proj.kernel_f = 1;
    proj.inputs = {input};
    skip = b.Add(proj);
  }
  LayerSpec add;
  add.name = name + "/add";
  add.kind = LayerKind::kAdd;
  add.inputs = {cat_i, skip};
  const std::size_t add_i = b.Add(add);
  LayerSpec bn;
  bn.name = name + "/bn";
  bn.kind = LayerKind::kBatchNorm;
  bn.inputs = {add_i};
  const std::size_t bn_i = b.Add(bn);
  LayerSpec relu;
  relu.name = name;
  relu.kind = LayerKind::kRelu;
  relu.inputs = {bn_i};
  b.Add(relu);
}

double GlorotLimit(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

}  // namespace

const char* LayerKindName(LayerKind k) {
  for (const auto& info : Kinds()) {
    if (info.kind == k) return info.name;
  }
  return "?";
}

Graph Graph::FromJson(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("graph json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array()) {
    throw Error(ErrorKind::kParse, "graph json: expected an object with a layers array");
  }
  Builder b;
  std::size_t inputs_seen = 0;
  for (const Json& item : doc["layers"]) {
    if (!item.is_object() || !item.contains("name") || !item.contains("kind") ||
        !item["name"].is_string() || !item["kind"].is_string()) {
      throw InvalidArgument("graph: every layer needs a string name and kind");
    }
    const std::string name = item["name"];
    const std::string kind = item["kind"];

    std::vector<std::size_t> inputs;
    if (item.contains("inputs")) {
      if (!item["inputs"].is_array()) throw InvalidArgument("graph: inputs must be an array");
      for (const Json& ref : item["inputs"]) inputs.push_back(b.Resolve(ref.get<std::string>()));
    } else if (item.contains("input")) {
      inputs.push_back(b.Resolve(item["input"].get<std::string>()));
    } else if (kind != "input") {
      if (b.layers_.empty()) throw InvalidArgument("graph: layer " + name + " has no input");
      inputs.push_back(b.layers_.size() - 1);
    }

    if (kind == "trinity") {
      for (const auto& [key, _] : item.items()) {
        if (key != "name" && key != "kind" && key != "input" && key != "filters" &&
            key != "concat_name") {
          throw InvalidArgument("graph: layer " + name + " has unknown key " + key);
        }
      }
      if (inputs.size() != 1) throw InvalidArgument("graph: trinity " + name + " needs one input");
      if (!item.contains("filters")) throw InvalidArgument("graph: trinity " + name + " needs filters");
      const std::size_t filters = PositiveSize(item["filters"], name + ".filters");
      const std::string concat_name = item.value("concat_name", std::string());
      ExpandTrinity(b, name, inputs[0], filters, concat_name);
      continue;
    }

    const auto it = std::find_if(Kinds().begin(), Kinds().end(),
                                 [&](const KindInfo& k) { return kind == k.name; });
    if (it == Kinds().end()) throw InvalidArgument("graph: unknown layer kind " + kind);
    for (const auto& [key, _] : item.items()) {
      if (key != "name" && key != "kind" && key != "input" && key != "inputs" &&
          !it->keys.count(key)) {
        throw InvalidArgument("graph: layer " + name + " has unknown key " + key);
      }
    }
    LayerSpec l;
    l.name = name;
    l.kind = it->kind;
    l.inputs = inputs;
    switch (l.kind) {
      case LayerKind::kInput: {
        ++inputs_seen;
        if (!item.contains("shape") || !item["shape"].is_array() || item["shape"].empty() ||
            item["shape"].size() > 2) {
          throw InvalidArgument("graph: input needs shape [F, C] or [D]");
        }
        for (const Json& d : item["shape"]) l.input_shape.push_back(PositiveSize(d, "input shape"));
        break;
      }
      case LayerKind::kDsepConv:
      case LayerKind::kConv:
        if (!item.contains("filters")) throw InvalidArgument("graph: " + name + " needs filters");
        l.filters = PositiveSize(item["filters"], name + ".filters");
        if (item.contains("kernel")) {
          std::tie(l.kernel_t, l.kernel_f) = SizePair(item["kernel"], name + ".kernel");
        }
        l.use_bias = item.value("use_bias", true);
        break;
      case LayerKind::kBatchNorm:
        l.eps = item.value("eps", 1e-3);
        if (!(l.eps > 0.0)) throw InvalidArgument("graph: " + name + ".eps must be positive");
        break;
      case LayerKind::kMaxPool:
        if (!item.contains("pool")) throw InvalidArgument("graph: " + name + " needs pool");
        std::tie(l.pool_t, l.pool_f) = SizePair(item["pool"], name + ".pool");
        break;
      case LayerKind::kGru:
        if (!item.contains("units")) throw InvalidArgument("graph: " + name + " needs units");
        l.filters = PositiveSize(item["units"], name + ".units");
        l.bidirectional = item.value("bidirectional", true);
        break;
      case LayerKind::kDense:
        if (!item.contains("units")) throw InvalidArgument("graph: " + name + " needs units");
        l.filters = PositiveSize(item["units"], name + ".units");
        l.use_bias = item.value("use_bias", true);
        break;
      default:
        break;
    }
    b.Add(std::move(l));
  }
  if (inputs_seen != 1 || b.layers_.empty() || b.layers_[0].kind != LayerKind::kInput) {
    throw InvalidArgument("graph: exactly one input layer is required, listed first");
  }

  Graph g;
  g.name_ = doc.value("name", std::string("graph"));
  g.layers_ = std::move(b.layers_);
  g.index_ = std::move(b.index_);
  g.output_ = g.layers_.size() - 1;
  if (doc.contains("output")) g.output_ = g.IndexOf(doc["output"].get<std::string>());
  if (doc.contains("pivots")) {
    for (const Json& p : doc["pivots"]) {
      g.IndexOf(p.get<std::string>());
      g.pivots_.push_back(p.get<std::string>());
    }
  }
  return g;
}

Graph Graph::Load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return FromJson(ss.str());
}

std::size_t Graph::IndexOf(const std::string& layer_name) const {
  const auto it = index_.find(layer_name);
  if (it == index_.end()) throw InvalidArgument("graph: no layer named " + layer_name);
  return it->second;
}

std::vector<Shape> Graph::InferShapes(std::size_t frames) const {
  if (frames == 0) throw ShapeError("graph: zero input frames");
  std::vector<Shape> shapes;
  shapes.reserve(layers_.size());
  for (const LayerSpec& l : layers_) {
    std::vector<const Shape*> in;
    for (std::size_t i : l.inputs) in.push_back(&shapes[i]);
    shapes.push_back(OutputShape(l, in, frames));
  }
  return shapes;
}

std::size_t Graph::MinFrames() const {
  std::size_t n = 1;
  for (const LayerSpec& l : layers_) {
    if (l.kind == LayerKind::kMaxPool) n *= l.pool_t;
  }
  return n;
}

std::vector<ParamCount> Graph::LayerParams() const {
  const auto shapes = InferShapes(MinFrames());
  std::vector<ParamCount> out;
  for (const LayerSpec& l : layers_) {
    ParamCount& pc = out.emplace_back();
    const std::uint64_t c = l.inputs.empty() ? 0 : shapes[l.inputs[0]].back();
    const std::uint64_t o = l.filters;
    const std::uint64_t bias = l.use_bias ? o : 0;
    switch (l.kind) {
      case LayerKind::kDsepConv:
        pc.trainable += l.kernel_t * l.kernel_f * c + c * o + bias;
        break;
      case LayerKind::kConv:
        pc.trainable += l.kernel_t * l.kernel_f * c * o + bias;
        break;
      case LayerKind::kBatchNorm:
        pc.trainable += 2 * c;
        pc.non_trainable += 2 * c;
        break;
      case LayerKind::kGru:
        pc.trainable += 3 * (c * o + o * o + o) * (l.bidirectional ? 2 : 1);
        break;
      case LayerKind::kDense:
        pc.trainable += c * o + bias;
        break;
      default:
        break;
    }
  }
  return out;
}

ParamCount Graph::CountParams() const {
  ParamCount pc;
  for (const ParamCount& l : LayerParams()) {
    pc.trainable += l.trainable;
    pc.non_trainable += l.non_trainable;
  }
  return pc;
}

std::vector<ArraySpec> Graph::RequiredArrays() const {
  const auto shapes = InferShapes(MinFrames());
  std::vector<ArraySpec> out;
  for (const LayerSpec& l : layers_) {
    const std::size_t c = l.inputs.empty() ? 0 : shapes[l.inputs[0]].back();
    const std::size_t o = l.filters;
    const std::string& n = l.name;
    switch (l.kind) {
      case LayerKind::kDsepConv:
        out.push_back({n + "/depthwise", {l.kernel_t, l.kernel_f, c}});
        out.push_back({n + "/pointwise", {c, o}});
        if (l.use_bias) out.push_back({n + "/bias", {o}});
        break;
      case LayerKind::kConv:
        out.push_back({n + "/kernel", {l.kernel_t, l.kernel_f, c, o}});
        if (l.use_bias) out.push_back({n + "/bias", {o}});
        break;
      case LayerKind::kBatchNorm:
        out.push_back({n + "/gamma", {c}});
        out.push_back({n + "/beta", {c}});
        out.push_back({n + "/moving_mean", {c}, false});
        out.push_back({n + "/moving_variance", {c}, false});
        break;
      case LayerKind::kGru:
        for (const char* dir : {"fw", "bw"}) {
          if (std::string(dir) == "bw" && !l.bidirectional) break;
          const std::string p = n + "/" + dir + "/";
          out.push_back({p + "W", {c, 3 * o}});
          out.push_back({p + "U", {o, 3 * o}});
          out.push_back({p + "b", {3 * o}});
        }
        break;
      case LayerKind::kDense:
        out.push_back({n + "/kernel", {c, o}});
        if (l.use_bias) out.push_back({n + "/bias", {o}});
        break;
      default:
        break;
    }
  }
  return out;
}

Weights Graph::RandomWeights(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Weights w;
  for (const ArraySpec& a : RequiredArrays()) {
    Tensor t(a.shape);
    const std::string leaf = a.name.substr(a.name.rfind('/') + 1);
    double limit = 0.0;
    if (leaf == "depthwise") {
      limit = GlorotLimit(a.shape[0] * a.shape[1], a.shape[0] * a.shape[1]);
    } else if (leaf == "pointwise" || leaf == "W" || leaf == "U") {
      limit = GlorotLimit(a.shape[0], a.shape[1]);
    } else if (leaf == "kernel") {
      const std::size_t receptive = a.shape.size() == 4 ? a.shape[0] * a.shape[1] : 1;
      limit = GlorotLimit(receptive * a.shape[a.shape.size() - 2],
                          receptive * a.shape.back());
    } else if (leaf == "gamma" || leaf == "moving_variance") {
      std::fill(t.data.begin(), t.data.end(), 1.0);
    }
    if (limit > 0.0) {
      std::uniform_real_distribution<double> dist(-limit, limit);
      for (double& v : t.data) v = dist(rng);
    }
    w.Set(a.name, std::move(t));
  }
  return w;
}

void Graph::CheckWeights(const Weights& w) const {
  for (const ArraySpec& a : RequiredArrays()) w.Get(a.name, a.shape);
}

Tensor Graph::Evaluate(const Weights& w, std::size_t i,
                       const std::vector<const Tensor*>& in) const {
  const LayerSpec& l = layers_[i];
  const Tensor& x = *in[0];
  const std::size_t c = x.channels();
  const std::size_t o = l.filters;
  const std::string& n = l.name;
  switch (l.kind) {
    case LayerKind::kInput:
      return x;
    case LayerKind::kDsepConv: {
      const Tensor* bias = l.use_bias ? &w.Get(n + "/bias", {o}) : nullptr;
      return DsepConv(x, w.Get(n + "/depthwise", {l.kernel_t, l.kernel_f, c}),
                      w.Get(n + "/pointwise", {c, o}), bias);
    }
    case LayerKind::kConv: {
      const Tensor* bias = l.use_bias ? &w.Get(n + "/bias", {o}) : nullptr;
      return Conv2d(x, w.Get(n + "/kernel", {l.kernel_t, l.kernel_f, c, o}), bias);
    }
    case LayerKind::kBatchNorm:
      return BatchNorm(x, w.Get(n + "/gamma", {c}), w.Get(n + "/beta", {c}),
                       w.Get(n + "/moving_mean", {c}), w.Get(n + "/moving_variance", {c}),
                       l.eps);
    case LayerKind::kRelu:
      return Relu(x);
    case LayerKind::kTanh:
      return Tanh(x);
    case LayerKind::kSigmoid:
      return Sigmoid(x);
    case LayerKind::kMaxPool:
      return MaxPool(x, l.pool_t, l.pool_f);
    case LayerKind::kConcat:
      return Concat(in);
    case LayerKind::kAdd: {
      Tensor y = x;
      for (std::size_t k = 1; k < in.size(); ++k) y = Add(y, *in[k]);
      return y;
    }
    case LayerKind::kReshape:
      return Flatten(x);
    case LayerKind::kGru: {
      Tensor fw = Gru(x, w.Get(n + "/fw/W", {c, 3 * o}), w.Get(n + "/fw/U", {o, 3 * o}),
                      w.Get(n + "/fw/b", {3 * o}), false);
      if (!l.bidirectional) return fw;
      Tensor bw = Gru(x, w.Get(n + "/bw/W", {c, 3 * o}), w.Get(n + "/bw/U", {o, 3 * o}),
                      w.Get(n + "/bw/b", {3 * o}), true);
      return Concat({&fw, &bw});
    }
    case LayerKind::kDense: {
      const Tensor* bias = l.use_bias ? &w.Get(n + "/bias", {o}) : nullptr;
      return Dense(x, w.Get(n + "/kernel", {c, o}), bias);
    }
  }
  throw InvalidArgument("graph: unknown layer kind");
}

std::vector<Tensor> Graph::ForwardAll(const Weights& w, const Tensor& input) const {
  const LayerSpec& in = layers_[0];
  if (input.rank() != in.input_shape.size() + 1 ||
      !std::equal(in.input_shape.begin(), in.input_shape.end(), input.shape.begin() + 1)) {
    throw ShapeError("graph: input shape " + ShapeString(input.shape) +
                     " does not match (T, " + ShapeString(in.input_shape).substr(1));
  }
  InferShapes(input.dim(0));
  std::vector<Tensor> acts(layers_.size());
  acts[0] = input;
  for (std::size_t i = 1; i < layers_.size(); ++i) {
    std::vector<const Tensor*> ins;
    for (std::size_t k : layers_[i].inputs) ins.push_back(&acts[k]);
    acts[i] = Evaluate(w, i, ins);
  }
  return acts;
}

Tensor Graph::Forward(const Weights& w, const Tensor& input) const {
  return ForwardAll(w, input)[output_];
}

std::vector<bool> Graph::Downstream(std::size_t pivot) const {
  std::vector<bool> flag(layers_.size(), false);
  if (pivot >= layers_.size()) throw InvalidArgument("graph: pivot index out of range");
  flag[pivot] = true;
  for (std::size_t i = pivot + 1; i < layers_.size(); ++i) {
    for (std::size_t k : layers_[i].inputs) flag[i] = flag[i] || flag[k];
  }
  return flag;
}

Tensor Graph::ForwardFrom(const Weights& w, const std::vector<Tensor>& cache,
                          std::size_t pivot, const Tensor& pivot_value) const {
  if (cache.size() != layers_.size()) throw InvalidArgument("graph: activation cache size mismatch");
  if (pivot_value.shape != cache[pivot].shape) {
    throw ShapeError("graph: replacement activation has shape " +
                     ShapeString(pivot_value.shape));
  }
  const auto flag = Downstream(pivot);
  if (!flag[output_]) return cache[output_];
  std::vector<Tensor> local(layers_.size());
  auto value = [&](std::size_t k) -> const Tensor* {
    if (k == pivot) return &pivot_value;
    return flag[k] ? &local[k] : &cache[k];
  };
  for (std::size_t i = pivot + 1; i <= output_; ++i) {
    if (!flag[i]) continue;
    std::vector<const Tensor*> ins;
    for (std::size_t k : layers_[i].inputs) ins.push_back(value(k));
    local[i] = Evaluate(w, i, ins);
  }
  return local[output_];
}

std::string DefaultGraphJson() {
  Json layers = Json::array();
  layers.push_back({{"name", "input"}, {"kind", "input"}, {"shape", {64, 8}}});
  layers.push_back({{"name", "stem"}, {"kind", "dsep_conv"}, {"filters", 32}});
  layers.push_back({{"name", "stem/bn"}, {"kind", "batch_norm"}});
  layers.push_back({{"name", "stem/relu"}, {"kind", "relu"}});
  const std::size_t widths[] = {64, 128, 256, 512, 1024};
  int module = 0;
  for (int stage = 0; stage < 5; ++stage) {
    for (int rep = 0; rep < 2; ++rep) {
      ++module;
      layers.push_back({{"name", "trinity" + std::to_string(module)},
                        {"kind", "trinity"},
                        {"filters", widths[stage]},
                        {"concat_name", "concat" + std::to_string(module)}});
    }
    layers.push_back({{"name", "pool" + std::to_string(stage + 1)},
                      {"kind", "max_pool"},
                      {"pool", {stage == 0 ? 5 : 1, 2}}});
  }
  layers.push_back({{"name", "reshape"}, {"kind", "reshape"}});
  layers.push_back({{"name", "gru1"}, {"kind", "gru"}, {"units", 256}, {"bidirectional", true}});
  layers.push_back({{"name", "gru2"}, {"kind", "gru"}, {"units", 128}, {"bidirectional", true}});
  layers.push_back({{"name", "fc1"}, {"kind", "dense"}, {"units", 128}});
  layers.push_back({{"name", "fc2"}, {"kind", "dense"}, {"units", 128}});
  layers.push_back({{"name", "fc3"}, {"kind", "dense"}, {"units", 36}});
  layers.push_back({{"name", "doa"}, {"kind", "tanh"}});
  Json doc;
  doc["name"] = "biseld-trinity";
  doc["layers"] = layers;
  doc["output"] = "doa";
  doc["pivots"] = {"concat8"};
  return doc.dump(2);
}

}  // namespace biseld::net
