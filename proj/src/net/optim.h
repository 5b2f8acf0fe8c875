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

#ifndef BISELD_NET_OPTIM_H_
#define BISELD_NET_OPTIM_H_

#include <cstddef>
#include <span>
#include <vector>

namespace biseld::net {

// Mean of squared differences over all elements.
double LossMse(std::span<const double> y, std::span<const double> y_hat);
// Mean binary cross-entropy; predictions are clamped to [1e-7, 1 - 1e-7].
double LossBce(std::span<const double> y, std::span<const double> y_hat);

struct MomentumState {
  std::vector<double> m;
};

// m = b1 m + (1 - b1) g;  w -= alpha m.
void SgdMomentumStep(std::span<double> w, std::span<const double> grad,
                     MomentumState& state, double alpha, double beta1 = 0.9);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t t = 0;
};

// m = b1 m + (1 - b1) g;  v = b2 v + (1 - b2) g^2;
// w -= alpha m / (sqrt(v) + eps). No bias correction.
void AdamStep(std::span<double> w, std::span<const double> grad, AdamState& state,
              double alpha, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

}  // namespace biseld::net

#endif  // BISELD_NET_OPTIM_H_
