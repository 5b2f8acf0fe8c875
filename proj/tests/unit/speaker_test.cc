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

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "common/error.h"
#include "doctest.h"
#include "speaker/speaker.h"
#include "speaker/struve.h"
#include "support/oracles.h"

namespace {

using namespace biseld;
using namespace biseld::speaker;
constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("speaker") {
  TEST_CASE("Struve H1 matches its integral representation") {
    for (double x : {1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0, 19.9, 20.1, 25.0, 35.0, 45.0}) {
      CHECK(std::abs(StruveH1(x) - testing::StruveH1Quadrature(x)) <= 1e-6);
    }
    CHECK(StruveH1(0.0) == 0.0);
  }

  TEST_CASE("Bessel J1 reference values") {
    CHECK(BesselJ1(0.0) == 0.0);
    CHECK(std::abs(BesselJ1(1.0) - 0.44005058574493355) < 1e-9);
    CHECK(std::abs(BesselJ1(10.0) - 0.04347274616886144) < 1e-9);
    CHECK(std::abs(BesselJ1(30.0) + 0.11875106261662294) < 1e-9);
  }

  TEST_CASE("circuit elements from the reference driver") {
    const TspSet tsp;
    CHECK_NOTHROW(tsp.Validate());
    const auto e = ComputeCircuit(tsp, 2.828, 800.0);
    CHECK(e.current == doctest::Approx(0.4495).epsilon(1e-3));
    CHECK(e.c_as == doctest::Approx(0.001106 * 0.002827 * 0.002827).epsilon(1e-12));
    CHECK(e.c_as == doctest::Approx(8.84e-9).epsilon(1e-3));
    CHECK(e.p_ag == doctest::Approx(tsp.bl * e.current / tsp.s_d));
    CHECK(e.m_ad == doctest::Approx(tsp.m_md * 1e-3 / (tsp.s_d * tsp.s_d)));
    CHECK(tsp.r_ms() == doctest::Approx(2 * kPi * tsp.f0 * tsp.m_ms * 1e-3 / tsp.q_ms));
    CHECK(std::isinf(ComputeCircuit(tsp, 2.828, std::numeric_limits<double>::infinity()).c_ab));
    CHECK(ComputeCircuit(tsp, 2.828, 1e9).c_ab > 1e3 * e.c_ab);
    CHECK_THROWS_AS(ComputeCircuit(tsp, 0.0, 800.0), Error);
    CHECK_THROWS_AS(ComputeCircuit(tsp, 2.828, -1.0), Error);
  }

  TEST_CASE("radiation load limits") {
    const TspSet tsp;
    const Air air;
    const double z0 = air.rho * air.c / tsp.s_d;
    CHECK(RadiationImpedance(2 * kPi * 1.0, tsp.s_d).r_ar < 1e-6 * z0);
    CHECK(RadiationImpedance(2 * kPi * 2e5, tsp.s_d).r_ar == doctest::Approx(z0).epsilon(1e-3));
    CHECK_THROWS_AS(RadiationImpedance(0.0, tsp.s_d), Error);
  }

  TEST_CASE("reference enclosure response figures") {
    const TspSet tsp;
    const auto start = std::chrono::steady_clock::now();
    const auto freqs = LogGrid();
    const auto table = Response(tsp, 2.828, 800.0, 1.0, freqs);
    const auto s = Summarize(table);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(std::abs(s.rolloff_hz - 116.0) <= 2.0);
    CHECK(std::abs(s.excursion_peak.freq_hz - 127.0) <= 5.0);
    CHECK(s.excursion_peak.value < 1.0e-3);
    const auto at162 = Response(tsp, 2.828, 800.0, 1.0, std::vector<double>{162.0});
    CHECK(std::abs(at162[0].volume_velocity) > 0.002);
    CHECK(secs < 1.0);
  }

  TEST_CASE("rolloff of an ideal second-order high-pass") {
    const double fc = 200.0;
    const auto f = LogGrid(2000, 10.0, 20000.0);
    std::vector<double> spl;
    for (double v : f) {
      const double x4 = std::pow(v / fc, 4.0);
      spl.push_back(10.0 * std::log10(x4 / (1.0 + x4)));
    }
    const double x6 = std::pow(std::pow(10.0, -0.6) / (1.0 - std::pow(10.0, -0.6)), 0.25);
    CHECK(FindRolloff(f, spl) == doctest::Approx(fc * x6).epsilon(0.01));
    CHECK(FindRolloff(f, spl, 20000.0) == doctest::Approx(fc * x6).epsilon(0.01));
    CHECK_THROWS_AS(FindRolloff(f, std::vector<double>(f.size(), 80.0)), Error);
  }

  TEST_CASE("response properties") {
    const TspSet tsp;
    const auto f = LogGrid(300, 10.0, 40000.0);
    const auto near = Response(tsp, 2.828, 800.0, 1.0, f);
    const auto far = Response(tsp, 2.828, 800.0, 2.0, f);
    const auto loud = Response(tsp, 5.656, 800.0, 1.0, f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(std::isfinite(near[i].spl_db));
      CHECK(std::isfinite(std::abs(near[i].excursion)));
      CHECK(std::isfinite(std::abs(near[i].volume_velocity)));
      if (f[i] >= 20.0 && f[i] <= 20000.0) CHECK(far[i].spl_db < near[i].spl_db);
      CHECK(loud[i].spl_db - near[i].spl_db == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));
    }
    const auto fine = LogGrid(4000, 50.0, 200.0);
    const auto open = Response(tsp, 2.828, std::numeric_limits<double>::infinity(), 1.0, fine);
    std::vector<double> uv;
    for (const auto& p : open) uv.push_back(std::abs(p.volume_velocity));
    const auto res = PeakOf(fine, uv);
    const double free = 1.0 / (2 * kPi * std::sqrt(tsp.m_ms * 1e-3 * tsp.c_ms));
    CHECK(res.freq_hz == doctest::Approx(free).epsilon(0.03));
    CHECK(free == doctest::Approx(tsp.f0).epsilon(0.01));
    CHECK_THROWS_AS(Response(tsp, 2.828, 800.0, 0.0, f), Error);
    CHECK_THROWS_AS(Response(tsp, 2.828, 800.0, 1.0, std::vector<double>{-5.0}), Error);
  }

  TEST_CASE("TSP JSON") {
    const TspSet a;
    const TspSet b = TspSet::FromJson(a.ToJson());
    CHECK(b.bl == a.bl);
    CHECK(TspSet::FromJson(R"({"BL": 4.0})").bl == 4.0);
    CHECK_THROWS_AS(TspSet::FromJson(R"({"bl": 4.0})"), Error);
    CHECK_THROWS_AS(TspSet::FromJson("[1]"), Error);
    TspSet bad;
    bad.q_ts = 1.5;
    CHECK_THROWS_AS(bad.Validate(), Error);
  }
}
