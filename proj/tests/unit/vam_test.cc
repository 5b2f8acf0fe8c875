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

#include <cmath>
#include <random>

#include "common/error.h"
#include "doctest.h"
#include "json.hpp"
#include "net/graph.h"
#include "support/oracles.h"
#include "vam/vam.h"

namespace {

using namespace biseld;
using namespace biseld::vam;
using net::Shape;
using Json = nlohmann::ordered_json;

Tensor RandomTensor(std::mt19937_64& rng, Shape s, double scale = 1.0) {
  Tensor t(std::move(s));
  t.data = testing::RandomVector(rng, t.size(), scale);
  return t;
}

// A pivot followed by a purely linear tail: reshape then dense.
net::Graph LinearTailGraph() {
  Json doc;
  doc["layers"] = Json::array({Json{{"name", "in"}, {"kind", "input"}, {"shape", {6, 4}}},
                               Json{{"name", "piv"}, {"kind", "dsep_conv"}, {"filters", 3}},
                               Json{{"name", "flat"}, {"kind", "reshape"}},
                               Json{{"name", "fc"}, {"kind", "dense"}, {"units", 36}}});
  doc["pivots"] = {"piv"};
  return net::Graph::FromJson(doc.dump());
}

}  // namespace

TEST_SUITE("vam") {
  TEST_CASE("class vector norm") {
    std::vector<double> f(36, 0.0);
    CHECK(VectorNorm(f, 4) == 0.0);
    f[2] = 3.0;
    f[14] = 4.0;
    CHECK(VectorNorm(f, 2) == 5.0);
    std::mt19937_64 rng(1);
    const auto v = testing::RandomVector(rng, 36);
    for (std::size_t c = 0; c < 12; ++c) {
      CHECK(std::abs(VectorNorm(v, c) - std::sqrt(v[c] * v[c] + v[12 + c] * v[12 + c] +
                                                   v[24 + c] * v[24 + c])) < 1e-12);
    }
    CHECK_THROWS_AS(VectorNorm(v, 12), Error);
    CHECK_THROWS_AS(VectorNorm(std::vector<double>(35, 0.0), 0), Error);
  }

  TEST_CASE("finite-difference gradients of a summing tail") {
    std::mt19937_64 rng(2);
    Tensor p = RandomTensor(rng, {3, 4, 2});
    for (double& v : p.data) v = std::abs(v) + 0.1;
    const Tail tail = [](const Tensor& x) {
      Tensor out({1, 36});
      for (double v : x.data) out.data[5] += v;
      return out;
    };
    const auto g = PivotGradientsFd(tail, p, 5, 1e-3);
    for (double v : g.grad.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(!g.norm_kink);
    const auto k = PivotGradientsFd(tail, p, 6, 1e-3);
    CHECK(k.norm_kink);
    CHECK_THROWS_AS(PivotGradientsFd(tail, p, 5, 0.0), Error);
    const Tail bad = [](const Tensor&) { return Tensor({1, 36}, NAN); };
    CHECK_THROWS_AS(PivotGradientsFd(bad, p, 5, 1e-3), Error);
  }

  TEST_CASE("GAP weights and weighted sums") {
    CHECK(GapWeights(Tensor({2, 3, 1}, 0.75))[0] == 0.75);
    CHECK(GapWeights(Tensor({2, 3, 1}, 0.0))[0] == 0.0);
    Tensor checker({4, 4, 1});
    for (std::size_t i = 0; i < 16; ++i) checker.data[i] = ((i / 4 + i % 4) % 2) ? 1.0 : -1.0;
    CHECK(GapWeights(checker)[0] == 0.0);

    std::mt19937_64 rng(3);
    const Tensor one = RandomTensor(rng, {3, 5, 1});
    const std::vector<double> w1{1.0};
    const Tensor r = WeightedSumRelu(one, w1);
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(r.data[i] == std::max(0.0, one.data[i]));
    Tensor pair({3, 5, 2});
    for (std::size_t i = 0; i < 15; ++i) {
      pair.data[2 * i] = one.data[i];
      pair.data[2 * i + 1] = -one.data[i];
    }
    const std::vector<double> w2{1.0, 1.0}, w0{0.0, 0.0};
    for (double v : WeightedSumRelu(pair, w2).data) CHECK(v == 0.0);
    for (double v : WeightedSumRelu(pair, w0).data) CHECK(v == 0.0);
    CHECK_THROWS_AS(WeightedSumRelu(pair, w1), Error);
  }

  TEST_CASE("bilinear upscaling") {
    std::mt19937_64 rng(4);
    const Tensor m = RandomTensor(rng, {4, 6});
    CHECK(Upscale(m, 4, 6).data == m.data);
    for (double v : Upscale(Tensor({3, 2}, 2.5), 10, 64).data) CHECK(v == doctest::Approx(2.5));
    Tensor hot({3, 3});
    hot.data[4] = 1.0;
    const Tensor up = Upscale(hot, 6, 6);
    auto tent = [](double d) { return std::max(0.0, 1.0 - std::abs(d)); };
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        const double si = std::clamp(i / 2.0 - 0.25, 0.0, 2.0);
        const double sj = std::clamp(j / 2.0 - 0.25, 0.0, 2.0);
        CHECK(up.data[i * 6 + j] == doctest::Approx(tent(si - 1.0) * tent(sj - 1.0)));
      }
    }
    Tensor pos = RandomTensor(rng, {5, 7});
    for (double& v : pos.data) v = std::abs(v);
    for (double v : Upscale(pos, 23, 64).data) CHECK(v >= 0.0);
    CHECK_THROWS_AS(Upscale(pos, 0, 4), Error);
  }

  TEST_CASE("linear tail matches the analytic map") {
    const net::Graph g = LinearTailGraph();
    const net::Weights w = g.RandomWeights(5);
    std::mt19937_64 rng(6);
    const Tensor x = RandomTensor(rng, {5, 6, 4});
    const std::size_t cls = 7;
    VamOptions opts;
    opts.class_index = cls;
    const VamResult r = ComputeVam(g, w, x, opts);

    const auto acts = g.ForwardAll(w, x);
    const Tensor& p = acts[g.IndexOf("piv")];
    const Tensor& out = acts[g.output_index()];
    const Tensor& k = w.Get("fc/kernel", {18, 36});
    Tensor grad(p.shape);
    const std::size_t per_frame = 6 * 3;
    for (std::size_t t = 0; t < 5; ++t) {
      const double* v = &out.data[t * 36];
      const double n = std::sqrt(v[cls] * v[cls] + v[12 + cls] * v[12 + cls] + v[24 + cls] * v[24 + cls]);
      for (std::size_t i = 0; i < per_frame; ++i) {
        double d = 0.0;
        for (std::size_t a = 0; a < 3; ++a) d += k.data[i * 36 + 12 * a + cls] * v[12 * a + cls] / n;
        grad.data[t * per_frame + i] = d;
      }
    }
    const Tensor expect = WeightedSumRelu(p, GapWeights(grad));
    REQUIRE(r.map.shape == expect.shape);
    double scale = 0.0;
    for (double v : expect.data) scale = std::max(scale, std::abs(v));
    REQUIRE(scale > 0.0);
    for (std::size_t i = 0; i < expect.size(); ++i) {
      CHECK(std::abs(r.map.data[i] - expect.data[i]) <= 1e-4 * scale);
      CHECK(r.map.data[i] >= 0.0);
    }
    CHECK(r.upscaled.shape == Shape{5, 6});
    CHECK(r.pivot == "piv");
    CHECK(r.frame_norms.size() == 5);
  }

  TEST_CASE("rescaled pivot with a compensated tail gives the same map") {
    std::mt19937_64 rng(7);
    const Tensor p = RandomTensor(rng, {4, 3, 2});
    const Tensor m = RandomTensor(rng, {24, 36});
    auto make_tail = [&](double s) {
      return Tail([&m, s](const Tensor& x) {
        Tensor out({1, 36});
        for (std::size_t i = 0; i < 24; ++i) {
          for (std::size_t j = 0; j < 36; ++j) out.data[j] += std::tanh(x.data[i] / s) * m.data[i * 36 + j];
        }
        return out;
      });
    };
    const double s = 8.0;
    Tensor sp = p;
    for (double& v : sp.data) v *= s;
    const auto a = PivotGradientsFd(make_tail(1.0), p, 3, 1e-3);
    const auto b = PivotGradientsFd(make_tail(s), sp, 3, s * 1e-3);
    const Tensor va = WeightedSumRelu(p, GapWeights(a.grad));
    const Tensor vb = WeightedSumRelu(sp, GapWeights(b.grad));
    for (std::size_t i = 0; i < va.size(); ++i) CHECK(vb.data[i] == doctest::Approx(va.data[i]).epsilon(1e-6));
  }

  TEST_CASE("maps from random networks are nonnegative") {
    std::mt19937_64 rng(8);
    Json doc;
    doc["layers"] = Json::array({Json{{"name", "in"}, {"kind", "input"}, {"shape", {8, 3}}},
                                 Json{{"name", "t1"}, {"kind", "trinity"}, {"filters", 6}},
                                 Json{{"name", "pool"}, {"kind", "max_pool"}, {"pool", {1, 2}}},
                                 Json{{"name", "flat"}, {"kind", "reshape"}},
                                 Json{{"name", "gru"}, {"kind", "gru"}, {"units", 4}},
                                 Json{{"name", "fc"}, {"kind", "dense"}, {"units", 36}},
                                 Json{{"name", "out"}, {"kind", "tanh"}}});
    doc["pivots"] = {"t1/concat"};
    const net::Graph g = net::Graph::FromJson(doc.dump());
    for (int i = 0; i < 3; ++i) {
      const auto w = g.RandomWeights(static_cast<std::uint64_t>(i));
      VamOptions opts;
      opts.class_index = static_cast<std::size_t>(i);
      const auto r = ComputeVam(g, w, RandomTensor(rng, {6, 8, 3}), opts);
      CHECK(r.map.shape == Shape{6, 8});
      for (double v : r.map.data) CHECK(v >= 0.0);
      for (double v : r.upscaled.data) CHECK(v >= 0.0);
    }
    VamOptions bad;
    bad.pivot = "nope";
    CHECK_THROWS_AS(ComputeVam(g, g.RandomWeights(0), RandomTensor(rng, {6, 8, 3}), bad), Error);
    bad.pivot = "flat";
    CHECK_THROWS_AS(ComputeVam(g, g.RandomWeights(0), RandomTensor(rng, {6, 8, 3}), bad), Error);
  }
}
