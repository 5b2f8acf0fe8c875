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

#include "vam/vam.h"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "common/error.h"
#include "common/parallel.h"
#include "net/decode.h"

namespace biseld::vam {

double VectorNorm(std::span<const double> frame, std::size_t class_index) {
  if (frame.size() != net::kOutputWidth) throw ShapeError("vam: expected 36 outputs");
  if (class_index >= net::kNumClasses) throw InvalidArgument("vam: class index out of range");
  const double x = frame[class_index];
  const double y = frame[net::kNumClasses + class_index];
  const double z = frame[2 * net::kNumClasses + class_index];
  return std::sqrt(x * x + y * y + z * z);
}

namespace {

void CheckOutput(const Tensor& out) {
  if (out.rank() != 2 || out.dim(1) != net::kOutputWidth) {
    throw ShapeError("vam: tail output must be (T, 36), got " + net::ShapeString(out.shape));
  }
  for (double v : out.data) {
    if (!std::isfinite(v)) throw DomainError("vam: non-finite tail output");
  }
}

std::vector<double> FrameNorms(const Tensor& out, std::size_t c) {
  std::vector<double> norms(out.dim(0));
  for (std::size_t t = 0; t < out.dim(0); ++t) {
    norms[t] = VectorNorm({&out.data[t * net::kOutputWidth], net::kOutputWidth}, c);
  }
  return norms;
}

}  // namespace

double Target(const Tensor& output, std::size_t class_index) {
  CheckOutput(output);
  double sum = 0.0;
  for (double n : FrameNorms(output, class_index)) sum += n;
  return sum;
}

Gradients PivotGradientsFd(const Tail& tail, const Tensor& pivot, std::size_t class_index,
                           double step) {
  if (!(step > 0.0)) throw InvalidArgument("vam: finite-difference step must be positive");
  Gradients g;
  g.grad = Tensor(pivot.shape);
  const Tensor base = tail(pivot);
  g.target = Target(base, class_index);
  for (double n : FrameNorms(base, class_index)) {
    if (n <= 1e-12) g.norm_kink = true;
  }
  std::atomic<bool> kink{false};
  ParallelFor(pivot.size(), [&](std::size_t i) {
    Tensor p = pivot;
    p.data[i] = pivot.data[i] + step;
    const Tensor up = tail(p);
    p.data[i] = pivot.data[i] - step;
    const Tensor down = tail(p);
    double t_up = 0.0, t_down = 0.0;
    CheckOutput(up);
    CheckOutput(down);
    for (double n : FrameNorms(up, class_index)) {
      t_up += n;
      if (n <= 1e-12) kink = true;
    }
    for (double n : FrameNorms(down, class_index)) {
      t_down += n;
      if (n <= 1e-12) kink = true;
    }
    g.grad.data[i] = (t_up - t_down) / (2.0 * step);
  });
  g.norm_kink = g.norm_kink || kink.load();
  return g;
}

std::vector<double> GapWeights(const Tensor& grads) {
  if (grads.rank() != 3) throw ShapeError("vam: gradients must be (T, F, C)");
  const std::size_t c = grads.dim(2);
  const std::size_t z = grads.dim(0) * grads.dim(1);
  std::vector<double> w(c, 0.0);
  for (std::size_t i = 0; i < grads.size(); ++i) w[i % c] += grads.data[i];
  for (double& v : w) v /= static_cast<double>(z);
  return w;
}

Tensor WeightedSumRelu(const Tensor& pivot, std::span<const double> weights) {
  if (pivot.rank() != 3) throw ShapeError("vam: pivot must be (T, F, C)");
  const std::size_t c = pivot.dim(2);
  if (weights.size() != c) {
    throw ShapeError("vam: " + std::to_string(weights.size()) + " weights for " +
                     std::to_string(c) + " channels");
  }
  Tensor map({pivot.dim(0), pivot.dim(1)});
  for (std::size_t p = 0; p < map.size(); ++p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < c; ++k) acc += weights[k] * pivot.data[p * c + k];
    map.data[p] = std::max(acc, 0.0);
  }
  return map;
}

Tensor Upscale(const Tensor& map, std::size_t rows, std::size_t cols) {
  if (map.rank() != 2 || map.size() == 0) throw ShapeError("vam: map must be a nonempty (T, F)");
  if (rows == 0 || cols == 0) throw InvalidArgument("vam: target size must be positive");
  const std::size_t in_r = map.dim(0), in_c = map.dim(1);
  auto source = [](std::size_t dst, std::size_t in, std::size_t out, std::size_t& i0,
                   std::size_t& i1, double& a) {
    double s = (static_cast<double>(dst) + 0.5) * static_cast<double>(in) /
                   static_cast<double>(out) - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(in - 1));
    i0 = static_cast<std::size_t>(std::floor(s));
    i1 = std::min(i0 + 1, in - 1);
    a = s - static_cast<double>(i0);
  };
  Tensor out({rows, cols});
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t r0, r1;
    double ar;
    source(r, in_r, rows, r0, r1, ar);
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t c0, c1;
      double ac;
      source(c, in_c, cols, c0, c1, ac);
      const double top = (1.0 - ac) * map.data[r0 * in_c + c0] + ac * map.data[r0 * in_c + c1];
      const double bot = (1.0 - ac) * map.data[r1 * in_c + c0] + ac * map.data[r1 * in_c + c1];
      out.data[r * cols + c] = (1.0 - ar) * top + ar * bot;
    }
  }
  return out;
}

VamResult ComputeVam(const net::Graph& g, const net::Weights& w, const Tensor& input,
                     const VamOptions& opts) {
  if (opts.class_index >= net::kNumClasses) throw InvalidArgument("vam: class index out of range");
  std::string pivot_name = opts.pivot;
  if (pivot_name.empty()) {
    if (g.pivots().empty()) throw InvalidArgument("vam: graph declares no pivot; name one");
    pivot_name = g.pivots().front();
  }
  const std::size_t pivot = g.IndexOf(pivot_name);
  const std::vector<Tensor> cache = g.ForwardAll(w, input);
  const Tensor& p = cache[pivot];
  if (p.rank() != 3) throw ShapeError("vam: pivot " + pivot_name + " is not a (T, F, C) map");
  if (!g.Downstream(pivot)[g.output_index()]) {
    throw InvalidArgument("vam: output does not depend on pivot " + pivot_name);
  }

  double rms = 0.0;
  for (double v : p.data) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(p.size()));
  const double step = opts.relative_step * (rms > 0.0 ? rms : 1.0);

  const Tail tail = [&](const Tensor& value) { return g.ForwardFrom(w, cache, pivot, value); };
  const Gradients grads = PivotGradientsFd(tail, p, opts.class_index, step);

  VamResult r;
  r.class_index = opts.class_index;
  r.pivot = pivot_name;
  r.map = WeightedSumRelu(p, GapWeights(grads.grad));
  r.upscaled = Upscale(r.map, input.dim(0), input.dim(1));
  r.target = grads.target;
  r.frame_norms = FrameNorms(cache[g.output_index()], opts.class_index);
  r.norm_kink = grads.norm_kink;
  r.step = step;
  return r;
}

}  // namespace biseld::vam
