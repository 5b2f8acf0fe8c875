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

#include "net/layers.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.h"

namespace biseld::net {
namespace {

void RequireRank(const Tensor& x, std::size_t rank, const char* op) {
  if (x.rank() != rank) {
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) +
                     " input, got " + ShapeString(x.shape));
  }
}

void RequireShape(const Tensor& t, const Shape& s, const char* what) {
  if (t.shape != s) {
    throw ShapeError(std::string(what) + ": shape " + ShapeString(t.shape) +
                     ", expected " + ShapeString(s));
  }
}

double SigmoidScalar(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

KernelAllocation TrinityAllocation(std::size_t c_out) {
  if (c_out < 3) throw InvalidArgument("trinity: needs at least 3 output channels");
  KernelAllocation a;
  a.b1 = c_out / 3;
  a.b2 = c_out / 3;
  a.b3 = c_out - 2 * (c_out / 3);
  a.stages = {{a.b1}, {a.b2 / 2, a.b2}, {a.b3 / 4, a.b3 / 2, a.b3}};
  for (const auto& branch : a.stages) {
    for (std::size_t w : branch) a.total_kernels += w;
  }
  return a;
}

Tensor DepthwiseConv(const Tensor& x, const Tensor& kernel) {
  RequireRank(x, 3, "depthwise conv");
  const std::size_t t = x.dim(0), f = x.dim(1), c = x.dim(2);
  if (kernel.rank() != 3 || kernel.dim(2) != c) {
    throw ShapeError("depthwise conv: kernel " + ShapeString(kernel.shape) +
                     " does not match " + std::to_string(c) + " channels");
  }
  const std::size_t kt = kernel.dim(0), kf = kernel.dim(1);
  const long pt = static_cast<long>((kt - 1) / 2), pf = static_cast<long>((kf - 1) / 2);
  Tensor y({t, f, c});
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < f; ++j) {
      double* out = &y.data[(i * f + j) * c];
      for (std::size_t a = 0; a < kt; ++a) {
        const long ii = static_cast<long>(i + a) - pt;
        if (ii < 0 || ii >= static_cast<long>(t)) continue;
        for (std::size_t b = 0; b < kf; ++b) {
          const long jj = static_cast<long>(j + b) - pf;
          if (jj < 0 || jj >= static_cast<long>(f)) continue;
          const double* in = &x.data[(static_cast<std::size_t>(ii) * f + jj) * c];
          const double* k = &kernel.data[(a * kf + b) * c];
          for (std::size_t ch = 0; ch < c; ++ch) out[ch] += in[ch] * k[ch];
        }
      }
    }
  }
  return y;
}

Tensor PointwiseConv(const Tensor& x, const Tensor& kernel, const Tensor* bias) {
  if (x.rank() < 2) throw ShapeError("pointwise conv: input rank < 2");
  const std::size_t c = x.channels();
  if (kernel.rank() != 2 || kernel.dim(0) != c) {
    throw ShapeError("pointwise conv: kernel " + ShapeString(kernel.shape) +
                     " does not match " + std::to_string(c) + " channels");
  }
  const std::size_t o = kernel.dim(1);
  if (bias) RequireShape(*bias, {o}, "pointwise bias");
  Shape shape = x.shape;
  shape.back() = o;
  Tensor y(shape);
  const std::size_t positions = x.size() / c;
  for (std::size_t p = 0; p < positions; ++p) {
    const double* in = &x.data[p * c];
    double* out = &y.data[p * o];
    if (bias) std::copy(bias->data.begin(), bias->data.end(), out);
    for (std::size_t ci = 0; ci < c; ++ci) {
      const double v = in[ci];
      if (v == 0.0) continue;
      const double* k = &kernel.data[ci * o];
      for (std::size_t co = 0; co < o; ++co) out[co] += v * k[co];
    }
  }
  return y;
}

Tensor DsepConv(const Tensor& x, const Tensor& depthwise, const Tensor& pointwise,
                const Tensor* bias) {
  return PointwiseConv(DepthwiseConv(x, depthwise), pointwise, bias);
}

Tensor Conv2d(const Tensor& x, const Tensor& kernel, const Tensor* bias) {
  RequireRank(x, 3, "conv");
  const std::size_t t = x.dim(0), f = x.dim(1), c = x.dim(2);
  if (kernel.rank() != 4 || kernel.dim(2) != c) {
    throw ShapeError("conv: kernel " + ShapeString(kernel.shape) + " does not match " +
                     std::to_string(c) + " channels");
  }
  const std::size_t kt = kernel.dim(0), kf = kernel.dim(1), o = kernel.dim(3);
  if (bias) RequireShape(*bias, {o}, "conv bias");
  const long pt = static_cast<long>((kt - 1) / 2), pf = static_cast<long>((kf - 1) / 2);
  Tensor y({t, f, o});
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < f; ++j) {
      double* out = &y.data[(i * f + j) * o];
      if (bias) std::copy(bias->data.begin(), bias->data.end(), out);
      for (std::size_t a = 0; a < kt; ++a) {
        const long ii = static_cast<long>(i + a) - pt;
        if (ii < 0 || ii >= static_cast<long>(t)) continue;
        for (std::size_t b = 0; b < kf; ++b) {
          const long jj = static_cast<long>(j + b) - pf;
          if (jj < 0 || jj >= static_cast<long>(f)) continue;
          const double* in = &x.data[(static_cast<std::size_t>(ii) * f + jj) * c];
          for (std::size_t ci = 0; ci < c; ++ci) {
            const double v = in[ci];
            const double* k = &kernel.data[((a * kf + b) * c + ci) * o];
            for (std::size_t co = 0; co < o; ++co) out[co] += v * k[co];
          }
        }
      }
    }
  }
  return y;
}

Tensor BatchNorm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                 const Tensor& mean, const Tensor& variance, double eps) {
  const std::size_t c = x.channels();
  for (const Tensor* p : {&gamma, &beta, &mean, &variance}) {
    RequireShape(*p, {c}, "batch norm parameter");
  }
  std::vector<double> scale(c), shift(c);
  for (std::size_t ch = 0; ch < c; ++ch) {
    if (!(variance.data[ch] + eps > 0.0)) throw DomainError("batch norm: nonpositive variance");
    scale[ch] = gamma.data[ch] / std::sqrt(variance.data[ch] + eps);
    shift[ch] = beta.data[ch] - mean.data[ch] * scale[ch];
  }
  Tensor y = x;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const std::size_t ch = i % c;
    y.data[i] = y.data[i] * scale[ch] + shift[ch];
  }
  return y;
}

Tensor Relu(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.data) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor Tanh(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.data) v = std::tanh(v);
  return y;
}

Tensor Sigmoid(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.data) v = SigmoidScalar(v);
  return y;
}

Tensor MaxPool(const Tensor& x, std::size_t pool_t, std::size_t pool_f) {
  RequireRank(x, 3, "max pool");
  if (pool_t == 0 || pool_f == 0) throw InvalidArgument("max pool: zero pool size");
  const std::size_t t = x.dim(0) / pool_t, f = x.dim(1) / pool_f, c = x.dim(2);
  if (t == 0 || f == 0) {
    throw ShapeError("max pool: input " + ShapeString(x.shape) + " smaller than the pool");
  }
  const std::size_t fin = x.dim(1);
  Tensor y({t, f, c}, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < f; ++j) {
      double* out = &y.data[(i * f + j) * c];
      for (std::size_t a = 0; a < pool_t; ++a) {
        for (std::size_t b = 0; b < pool_f; ++b) {
          const double* in = &x.data[((i * pool_t + a) * fin + j * pool_f + b) * c];
          for (std::size_t ch = 0; ch < c; ++ch) out[ch] = std::max(out[ch], in[ch]);
        }
      }
    }
  }
  return y;
}

Tensor Concat(const std::vector<const Tensor*>& parts) {
  if (parts.empty()) throw InvalidArgument("concat: no inputs");
  Shape shape = parts[0]->shape;
  std::size_t total = 0;
  for (const Tensor* p : parts) {
    if (p->rank() != shape.size() ||
        !std::equal(shape.begin(), shape.end() - 1, p->shape.begin())) {
      throw ShapeError("concat: incompatible input " + ShapeString(p->shape));
    }
    total += p->channels();
  }
  shape.back() = total;
  Tensor y(shape);
  const std::size_t positions = y.size() / total;
  std::size_t offset = 0;
  for (const Tensor* p : parts) {
    const std::size_t c = p->channels();
    for (std::size_t q = 0; q < positions; ++q) {
      std::copy_n(&p->data[q * c], c, &y.data[q * total + offset]);
    }
    offset += c;
  }
  return y;
}

Tensor Add(const Tensor& a, const Tensor& b) {
  if (a.shape != b.shape) {
    throw ShapeError("add: shapes " + ShapeString(a.shape) + " and " + ShapeString(b.shape));
  }
  Tensor y = a;
  for (std::size_t i = 0; i < y.size(); ++i) y.data[i] += b.data[i];
  return y;
}

Tensor Flatten(const Tensor& x) {
  RequireRank(x, 3, "reshape");
  Tensor y = x;
  y.shape = {x.dim(0), x.dim(1) * x.dim(2)};
  return y;
}

Tensor Gru(const Tensor& x, const Tensor& w, const Tensor& u, const Tensor& b,
           bool reverse) {
  RequireRank(x, 2, "gru");
  const std::size_t t = x.dim(0), d = x.dim(1);
  if (w.rank() != 2 || w.dim(0) != d || w.dim(1) % 3 != 0) {
    throw ShapeError("gru: input kernel " + ShapeString(w.shape) + " does not match width " +
                     std::to_string(d));
  }
  const std::size_t h = w.dim(1) / 3;
  RequireShape(u, {h, 3 * h}, "gru recurrent kernel");
  RequireShape(b, {3 * h}, "gru bias");
  Tensor y({t, h});
  std::vector<double> state(h, 0.0), gx(3 * h), gh(3 * h), rh(h);
  for (std::size_t step = 0; step < t; ++step) {
    const std::size_t ti = reverse ? t - 1 - step : step;
    const double* xt = &x.data[ti * d];
    std::copy(b.data.begin(), b.data.end(), gx.begin());
    for (std::size_t i = 0; i < d; ++i) {
      const double v = xt[i];
      const double* row = &w.data[i * 3 * h];
      for (std::size_t k = 0; k < 3 * h; ++k) gx[k] += v * row[k];
    }
    // z and r from the previous state.
    std::fill(gh.begin(), gh.end(), 0.0);
    for (std::size_t i = 0; i < h; ++i) {
      const double v = state[i];
      const double* row = &u.data[i * 3 * h];
      for (std::size_t k = 0; k < 2 * h; ++k) gh[k] += v * row[k];
    }
    std::vector<double> z(h);
    for (std::size_t k = 0; k < h; ++k) {
      z[k] = SigmoidScalar(gx[k] + gh[k]);
      rh[k] = SigmoidScalar(gx[h + k] + gh[h + k]) * state[k];
    }
    for (std::size_t i = 0; i < h; ++i) {
      const double v = rh[i];
      const double* row = &u.data[i * 3 * h + 2 * h];
      for (std::size_t k = 0; k < h; ++k) gh[2 * h + k] += v * row[k];
    }
    for (std::size_t k = 0; k < h; ++k) {
      const double g = std::tanh(gx[2 * h + k] + gh[2 * h + k]);
      state[k] = z[k] * state[k] + (1.0 - z[k]) * g;
    }
    std::copy(state.begin(), state.end(), &y.data[ti * h]);
  }
  return y;
}

Tensor Dense(const Tensor& x, const Tensor& kernel, const Tensor* bias) {
  RequireRank(x, 2, "dense");
  return PointwiseConv(x, kernel, bias);
}

}  // namespace biseld::net
