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

#include "speaker/struve.h"

#include <cmath>
#include <numbers>

#include "common/error.h"

namespace biseld::speaker {
namespace {

constexpr double kSeriesLimit = 20.0;

double StruveSeries(double x) {
  // sum_k (-1)^k (x/2)^(2k+2) / (Gamma(k+3/2) Gamma(k+5/2))
  const long double h = 0.5L * x;
  const long double h2 = h * h;
  long double term = h2 / (std::tgamma(1.5L) * std::tgamma(2.5L));
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -h2 / ((k + 0.5L) * (k + 1.5L));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

double StruveAsymptotic(double x) {
  // H1 - Y1 ~ (1/pi) sum_k Gamma(k+1/2) / Gamma(3/2-k) (x/2)^(-2k)
  const double inv = 2.0 / x;
  double sum = 0.0;
  double prev = INFINITY;
  for (int k = 0; k < 30; ++k) {
    const double t = std::tgamma(k + 0.5) / std::tgamma(1.5 - k) * std::pow(inv, 2 * k);
    if (std::fabs(t) > prev) break;  // past the smallest term
    sum += t;
    prev = std::fabs(t);
    if (prev < 1e-17 * std::fabs(sum)) break;
  }
  return std::cyl_neumann(1.0, x) + sum / std::numbers::pi;
}

}  // namespace

double StruveH1(double x) {
  if (!(x >= 0.0)) throw InvalidArgument("struve: argument must be >= 0");
  if (x == 0.0) return 0.0;
  return x <= kSeriesLimit ? StruveSeries(x) : StruveAsymptotic(x);
}

double BesselJ1(double x) { return std::cyl_bessel_j(1.0, x); }

}  // namespace biseld::speaker
