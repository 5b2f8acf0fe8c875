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
#include <set>

#include "common/error.h"
#include "doctest.h"
#include "json.hpp"
#include "net/decode.h"
#include "net/graph.h"
#include "net/layers.h"
#include "net/optim.h"
#include "net/weights.h"
#include "support/oracles.h"

namespace {

using namespace biseld;
using namespace biseld::net;
using Json = nlohmann::ordered_json;

Tensor RandomTensor(std::mt19937_64& rng, Shape s, double scale = 1.0) {
  Tensor t(std::move(s));
  t.data = testing::RandomVector(rng, t.size(), scale);
  return t;
}

double At(const Tensor& x, std::size_t t, std::size_t f, std::size_t c) {
  return x.data[(t * x.dim(1) + f) * x.dim(2) + c];
}

// Bounding box (rows, cols) of the nonzero entries of a (T, F, C) map.
std::pair<std::size_t, std::size_t> Support(const Tensor& x) {
  std::size_t t0 = SIZE_MAX, t1 = 0, f0 = SIZE_MAX, f1 = 0;
  for (std::size_t t = 0; t < x.dim(0); ++t) {
    for (std::size_t f = 0; f < x.dim(1); ++f) {
      for (std::size_t c = 0; c < x.dim(2); ++c) {
        if (At(x, t, f, c) != 0.0) {
          t0 = std::min(t0, t);
          t1 = std::max(t1, t);
          f0 = std::min(f0, f);
          f1 = std::max(f1, f);
        }
      }
    }
  }
  if (t0 == SIZE_MAX) return {0, 0};
  return {t1 - t0 + 1, f1 - f0 + 1};
}

std::string TrinityGraph(std::size_t f, std::size_t c, std::size_t filters) {
  Json doc;
  doc["layers"] = Json::array({Json{{"name", "in"}, {"kind", "input"}, {"shape", {f, c}}},
                               Json{{"name", "t"}, {"kind", "trinity"}, {"filters", filters}}});
  return doc.dump();
}

}  // namespace

TEST_SUITE("net") {
  TEST_CASE("trinity kernel allocation") {
    const auto a = TrinityAllocation(64);
    CHECK(a.b1 == 21);
    CHECK(a.b2 == 21);
    CHECK(a.b3 == 22);
    CHECK(a.total_kernels == 90);
    CHECK(TrinityAllocation(3).total_kernels == 3);
    CHECK(TrinityAllocation(12).total_kernels == 17);
    for (std::size_t c = 3; c <= 1024; ++c) {
      const auto k = TrinityAllocation(c);
      CHECK(k.b1 + k.b2 + k.b3 == c);
      CHECK(k.b1 == c / 3);
      CHECK(k.b2 == c / 3);
      REQUIRE(k.stages.size() == 3);
      CHECK(k.stages[0] == std::vector<std::size_t>{k.b1});
      CHECK(k.stages[1] == std::vector<std::size_t>{k.b2 / 2, k.b2});
      CHECK(k.stages[2] == std::vector<std::size_t>{k.b3 / 4, k.b3 / 2, k.b3});
      CHECK(k.total_kernels == k.b1 + k.b2 / 2 + k.b2 + k.b3 / 4 + k.b3 / 2 + k.b3);
    }
    CHECK_THROWS_AS(TrinityAllocation(2), Error);
  }

  TEST_CASE("depthwise separable convolution") {
    std::mt19937_64 rng(1);
    const Tensor x = RandomTensor(rng, {5, 6, 3});
    Tensor dw({3, 3, 3});
    for (std::size_t c = 0; c < 3; ++c) dw.data[(1 * 3 + 1) * 3 + c] = 1.0;
    Tensor pw({3, 3});
    for (std::size_t c = 0; c < 3; ++c) pw.data[c * 3 + c] = 1.0;
    CHECK(DsepConv(x, dw, pw, nullptr).data == x.data);

    Tensor one({1, 1, 1}, 0.7);
    Tensor k1 = RandomTensor(rng, {3, 3, 1});
    Tensor p1({1, 1}, -1.3);
    Tensor b1({1}, 0.25);
    CHECK(DsepConv(one, k1, p1, &b1).data[0] == doctest::Approx(0.7 * k1.data[4] * -1.3 + 0.25).epsilon(1e-14));

    const Tensor plane({6, 7, 2}, 1.5);
    const Tensor k2 = RandomTensor(rng, {3, 3, 2});
    const Tensor p2 = RandomTensor(rng, {2, 4});
    const Tensor y = DsepConv(plane, k2, p2, nullptr);
    CHECK(y.shape == Shape{6, 7, 4});
    for (std::size_t t = 1; t + 1 < 6; ++t) {
      for (std::size_t f = 1; f + 1 < 7; ++f) {
        for (std::size_t o = 0; o < 4; ++o) CHECK(At(y, t, f, o) == doctest::Approx(At(y, 1, 1, o)));
      }
    }
    CHECK_THROWS_AS(DsepConv(plane, RandomTensor(rng, {3, 3, 3}), p2, nullptr), Error);
  }

  TEST_CASE("activations match their closed forms") {
    std::mt19937_64 rng(2);
    const Tensor x = RandomTensor(rng, {100}, 6.0);
    const Tensor r = Relu(x), t = Tanh(x), s = Sigmoid(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(r.data[i] == std::max(0.0, x.data[i]));
      CHECK(std::abs(t.data[i] - (std::exp(2 * x.data[i]) - 1) / (std::exp(2 * x.data[i]) + 1)) < 1e-12);
      CHECK(std::abs(s.data[i] - 1.0 / (1.0 + std::exp(-x.data[i]))) < 1e-12);
    }
  }

  TEST_CASE("pooling, concat, add and batch norm") {
    std::mt19937_64 rng(3);
    const Tensor x = RandomTensor(rng, {11, 6, 2});
    const Tensor p = MaxPool(x, 5, 2);
    CHECK(p.shape == Shape{2, 3, 2});
    double m = -1e9;
    for (std::size_t t = 0; t < 5; ++t) {
      for (std::size_t f = 0; f < 2; ++f) m = std::max(m, At(x, t, f, 1));
    }
    CHECK(At(p, 0, 0, 1) == m);
    const Tensor y = RandomTensor(rng, {11, 6, 3});
    const Tensor c = Concat({&x, &y});
    CHECK(c.shape == Shape{11, 6, 5});
    CHECK(At(c, 4, 3, 3) == At(y, 4, 3, 1));
    CHECK_THROWS_AS(Add(x, y), Error);
    Tensor g({2}, 2.0), b({2}, 0.5), mu({2}, 1.0), var({2}, 3.0);
    const Tensor n = BatchNorm(x, g, b, mu, var, 1e-3);
    CHECK(n.data[7] == doctest::Approx(2.0 * (x.data[7] - 1.0) / std::sqrt(3.001) + 0.5));
  }

  TEST_CASE("GRU recurrence") {
    Tensor x({4, 3}, 0.3);
    const Tensor z = Gru(x, Tensor({3, 6}), Tensor({2, 6}), Tensor({6}), false);
    CHECK(z.shape == Shape{4, 2});
    for (double v : z.data) CHECK(v == 0.0);

    Tensor w({1, 3}), u({1, 3}), b({3});
    w.data = {0.5, -0.4, 0.9};
    u.data = {0.3, 0.7, -0.6};
    b.data = {0.1, 0.2, -0.05};
    Tensor seq({2, 1});
    seq.data = {1.0, -0.5};
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    double h = 0.0;
    std::vector<double> expect;
    for (double xt : seq.data) {
      const double zg = sig(w.data[0] * xt + u.data[0] * h + b.data[0]);
      const double rg = sig(w.data[1] * xt + u.data[1] * h + b.data[1]);
      const double cand = std::tanh(w.data[2] * xt + u.data[2] * (rg * h) + b.data[2]);
      h = zg * h + (1 - zg) * cand;
      expect.push_back(h);
    }
    const Tensor out = Gru(seq, w, u, b, false);
    CHECK(out.data[0] == doctest::Approx(expect[0]).epsilon(1e-14));
    CHECK(out.data[1] == doctest::Approx(expect[1]).epsilon(1e-14));
    Tensor rev({2, 1});
    rev.data = {-0.5, 1.0};
    const Tensor back = Gru(rev, w, u, b, true);
    CHECK(back.data[1] == doctest::Approx(expect[0]).epsilon(1e-14));
    CHECK(back.data[0] == doctest::Approx(expect[1]).epsilon(1e-14));
  }

  TEST_CASE("parameter counts of single layers") {
    Json dense;
    dense["layers"] = Json::array({Json{{"name", "in"}, {"kind", "input"}, {"shape", {40}}},
                                   Json{{"name", "fc"}, {"kind", "dense"}, {"units", 36}}});
    const auto d = Graph::FromJson(dense.dump()).CountParams();
    CHECK(d.trainable == 36 * 40 + 36);
    CHECK(d.non_trainable == 0);
    Json bn;
    bn["layers"] = Json::array({Json{{"name", "in"}, {"kind", "input"}, {"shape", {8, 64}}},
                                Json{{"name", "bn"}, {"kind", "batch_norm"}}});
    const auto n = Graph::FromJson(bn.dump()).CountParams();
    CHECK(n.trainable == 128);
    CHECK(n.non_trainable == 128);
    Json gru;
    gru["layers"] = Json::array({Json{{"name", "in"}, {"kind", "input"}, {"shape", {10}}},
                                 Json{{"name", "g"}, {"kind", "gru"}, {"units", 4}}});
    const Graph gg = Graph::FromJson(gru.dump());
    CHECK(gg.CountParams().trainable == 2 * (3 * 4 * (10 + 4 + 1)));
    CHECK(gg.InferShapes(7).back() == Shape{7, 8});
  }

  TEST_CASE("analytic counts equal enumerated weights on random graphs") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 25; ++i) {
      const std::string text = testing::RandomGraphJson(rng);
      const Graph g = Graph::FromJson(text);
      const Weights w = g.RandomWeights(static_cast<std::uint64_t>(i));
      const auto e = testing::EnumerateParams(g, w);
      const auto a = g.CountParams();
      CHECK(e.all_required);
      CHECK(a.trainable == e.trainable);
      CHECK(a.non_trainable == e.non_trainable);
      std::uint64_t sum = 0;
      for (const auto& p : g.LayerParams()) sum += p.total();
      CHECK(sum == a.total());
    }
  }

  TEST_CASE("forward shapes agree with inferred shapes") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
      const Graph g = Graph::FromJson(testing::RandomGraphJson(rng));
      const std::size_t frames = g.MinFrames() * 3;
      const auto shapes = g.InferShapes(frames);
      Shape in{frames};
      for (std::size_t d : g.layers()[0].input_shape) in.push_back(d);
      const auto acts = g.ForwardAll(g.RandomWeights(9), RandomTensor(rng, in));
      REQUIRE(acts.size() == shapes.size());
      for (std::size_t k = 0; k < acts.size(); ++k) {
        CHECK(acts[k].shape == shapes[k]);
        for (double v : acts[k].data) CHECK(std::isfinite(v));
      }
    }
  }

  TEST_CASE("default network pools time by five and frequency to two") {
    const Graph g = Graph::FromJson(DefaultGraphJson());
    CHECK(g.MinFrames() == 5);
    const auto shapes = g.InferShapes(50);
    CHECK(shapes[0] == Shape{50, 64, 8});
    CHECK(shapes[g.IndexOf("pool5")] == Shape{10, 2, 1024});
    CHECK(shapes[g.IndexOf("reshape")] == Shape{10, 2048});
    CHECK(shapes.back() == Shape{10, 36});
    CHECK(g.layers()[g.output_index()].kind == LayerKind::kTanh);
    std::size_t bn64 = 0;
    for (std::size_t i = 0; i < g.layers().size(); ++i) {
      if (g.layers()[i].kind == LayerKind::kBatchNorm && shapes[i].back() == 64) ++bn64;
    }
    CHECK(bn64 == 2);
    CHECK_THROWS_AS(g.InferShapes(4), Error);
  }

  TEST_CASE("trinity module with silent branches passes the skip path") {
    const Graph g = Graph::FromJson(TrinityGraph(9, 12, 12));
    Weights w = g.RandomWeights(3);
    Weights zeroed;
    for (const auto& [name, t] : w.arrays()) {
      const bool branch = name.find("/b") != std::string::npos && name.rfind("t/bn", 0) != 0;
      zeroed.Set(name, branch ? Tensor(t.shape, 0.0) : t);
    }
    std::mt19937_64 rng(6);
    const Tensor x = RandomTensor(rng, {7, 9, 12});
    const Tensor y = g.Forward(zeroed, x);
    REQUIRE(y.shape == x.shape);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(y.data[i] == doctest::Approx(std::max(0.0, x.data[i]) / std::sqrt(1.0 + 1e-3)));
    }
    const Graph p = Graph::FromJson(TrinityGraph(9, 5, 12));
    CHECK(p.InferShapes(7).back() == Shape{7, 9, 12});
    CHECK_NOTHROW(p.IndexOf("t/proj"));
  }

  TEST_CASE("trinity branch receptive fields") {
    const Graph g = Graph::FromJson(TrinityGraph(15, 2, 12));
    const Weights w = g.RandomWeights(8);
    Tensor x({15, 15, 2});
    x.data[(7 * 15 + 7) * 2 + 0] = 1.0;
    x.data[(7 * 15 + 7) * 2 + 1] = -0.5;
    const auto acts = g.ForwardAll(w, x);
    CHECK(Support(acts[g.IndexOf("t/b1_0")]) == std::pair<std::size_t, std::size_t>{3, 3});
    CHECK(Support(acts[g.IndexOf("t/b2_1")]) == std::pair<std::size_t, std::size_t>{5, 5});
    CHECK(Support(acts[g.IndexOf("t/b3_2")]) == std::pair<std::size_t, std::size_t>{7, 7});
  }

  TEST_CASE("graph validation errors") {
    CHECK_THROWS_AS(Graph::FromJson("{"), Error);
    CHECK_THROWS_AS(Graph::FromJson(R"({"layers": [{"name": "in", "kind": "input", "shape": [4, 2]},
      {"name": "x", "kind": "warp"}]})"), Error);
    CHECK_THROWS_AS(Graph::FromJson(R"({"layers": [{"name": "in", "kind": "input", "shape": [4, 2]},
      {"name": "x", "kind": "relu", "units": 3}]})"), Error);
    CHECK_THROWS_AS(Graph::FromJson(R"({"layers": [{"name": "in", "kind": "input", "shape": [4, 2]},
      {"name": "d", "kind": "dense", "units": 3, "input": "nope"}]})"), Error);
    CHECK_THROWS_AS(Graph::FromJson(R"({"layers": [{"name": "in", "kind": "input", "shape": [4, 2]},
      {"name": "p", "kind": "max_pool", "pool": [1, 2]}, {"name": "c", "kind": "concat", "inputs": ["in", "p"]}]})"), Error);
  }

  TEST_CASE("weights round trip and shape checks") {
    testing::TempDir tmp;
    const Graph g = Graph::FromJson(TrinityGraph(6, 3, 9));
    const Weights w = g.RandomWeights(11);
    SaveWeights(tmp / "w.bin", w);
    const Weights r = LoadWeights(tmp / "w.bin");
    CHECK_NOTHROW(g.CheckWeights(r));
    for (const auto& [name, t] : w.arrays()) {
      const Tensor& u = r.Get(name, t.shape);
      for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(u.data[i] == static_cast<double>(static_cast<float>(t.data[i])));
      }
    }
    Weights missing;
    CHECK_THROWS_AS(g.CheckWeights(missing), Error);
    CHECK_THROWS_AS(w.Get("t/bn/gamma", {5}), Error);
    CHECK(g.RandomWeights(11).arrays().begin()->second.data == w.arrays().begin()->second.data);
  }

  TEST_CASE("output decoding") {
    std::vector<double> f(36, 0.0);
    f[12] = 1.0;
    auto d = DecodeOutput(f);
    REQUIRE(d.size() == 1);
    CHECK(d[0].class_index == 0);
    CHECK(d[0].azimuth_deg == 0.0);
    CHECK(d[0].elevation_deg == 0.0);
    CHECK(d[0].magnitude == 1.0);
    std::fill(f.begin(), f.end(), 0.0);
    f[5] = 1.0;
    d = DecodeOutput(f);
    REQUIRE(d.size() == 1);
    CHECK(d[0].class_index == 5);
    CHECK(d[0].azimuth_deg == 90.0);
    std::fill(f.begin(), f.end(), 0.0);
    f[3] = 0.4;
    CHECK(DecodeOutput(f).empty());
    f[3] = 0.0;
    f[24 + 7] = 0.9;
    d = DecodeOutput(f);
    REQUIRE(d.size() == 1);
    CHECK(d[0].azimuth_deg == 0.0);
    CHECK(d[0].elevation_deg == 90.0);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      const auto v = testing::RandomVector(rng, 36);
      std::vector<double> s(v);
      for (double& e : s) e *= 3.7;
      const auto a = DecodeOutput(v, 0.0), b = DecodeOutput(s, 0.0);
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].azimuth_deg == doctest::Approx(b[k].azimuth_deg).epsilon(1e-12));
        CHECK(a[k].elevation_deg == doctest::Approx(b[k].elevation_deg).epsilon(1e-12));
        CHECK(b[k].magnitude == doctest::Approx(3.7 * a[k].magnitude).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("losses") {
    const std::vector<double> y{0.0, 2.0}, z{0.0, 0.0};
    CHECK(LossMse(y, y) == 0.0);
    CHECK(LossMse(y, z) == 2.0);
    const std::vector<double> h(6, 0.5);
    CHECK(LossBce(h, h) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(std::isfinite(LossBce(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0})));
    CHECK_THROWS_AS(LossMse(y, std::vector<double>{1.0}), Error);
  }

  TEST_CASE("optimizer steps") {
    std::vector<double> w{1.0};
    const std::vector<double> g{1.0}, zero{0.0};
    MomentumState ms;
    SgdMomentumStep(w, zero, ms, 0.1);
    CHECK(w[0] == 1.0);
    SgdMomentumStep(w, g, ms, 0.1);
    CHECK(std::abs(w[0] - (1.0 - 0.1 * 0.1)) < 1e-12);
    SgdMomentumStep(w, zero, ms, 0.1);
    CHECK(std::abs(ms.m[0] - 0.09) < 1e-15);
    SgdMomentumStep(w, zero, ms, 0.1);
    CHECK(std::abs(ms.m[0] - 0.081) < 1e-15);

    std::vector<double> a{1.0};
    AdamState st;
    AdamStep(a, zero, st, 0.1);
    CHECK(a[0] == 1.0);
    AdamStep(a, g, st, 0.1);
    CHECK(std::abs(a[0] - (1.0 - 0.1 * 0.1 / (std::sqrt(0.001) + 1e-8))) < 1e-12);
    CHECK(st.t == 2);
    std::vector<double> two(2, 0.0);
    CHECK_THROWS_AS(AdamStep(two, g, st, 0.1), Error);
  }
}
