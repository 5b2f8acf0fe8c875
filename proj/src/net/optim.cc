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

#include "net/optim.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"

namespace biseld::net {
namespace {

void SameSize(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ShapeError(std::string(what) + ": size mismatch");
  if (a == 0) throw InvalidArgument(std::string(what) + ": empty input");
}

}  // namespace

double LossMse(std::span<const double> y, std::span<const double> y_hat) {
  SameSize(y.size(), y_hat.size(), "mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
  return acc / static_cast<double>(y.size());
}

double LossBce(std::span<const double> y, std::span<const double> y_hat) {
  SameSize(y.size(), y_hat.size(), "bce");
  constexpr double kClamp = 1e-7;
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = std::clamp(y_hat[i], kClamp, 1.0 - kClamp);
    acc += y[i] * std::log(p) + (1.0 - y[i]) * std::log(1.0 - p);
  }
  return -acc / static_cast<double>(y.size());
}

void SgdMomentumStep(std::span<double> w, std::span<const double> grad,
                     MomentumState& state, double alpha, double beta1) {
  SameSize(w.size(), grad.size(), "sgd");
  if (state.m.empty()) state.m.assign(w.size(), 0.0);
  SameSize(w.size(), state.m.size(), "sgd state");
  for (std::size_t i = 0; i < w.size(); ++i) {
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
    w[i] -= alpha * state.m[i];
  }
}

void AdamStep(std::span<double> w, std::span<const double> grad, AdamState& state,
              double alpha, double beta1, double beta2, double eps) {
  SameSize(w.size(), grad.size(), "adam");
  if (state.m.empty()) state.m.assign(w.size(), 0.0);
  if (state.v.empty()) state.v.assign(w.size(), 0.0);
  SameSize(w.size(), state.m.size(), "adam state");
  SameSize(w.size(), state.v.size(), "adam state");
  for (std::size_t i = 0; i < w.size(); ++i) {
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grad[i] * grad[i];
    w[i] -= alpha * state.m[i] / (std::sqrt(state.v[i]) + eps);
  }
  ++state.t;
}

}  // namespace biseld::net
