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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "btff/btff.h"
#include "btff/mel.h"
#include "common/error.h"
#include "doctest.h"
#include "support/oracles.h"

namespace {

using namespace biseld;
using namespace biseld::btff;
constexpr double kPi = std::numbers::pi;

RealMap Constant(std::size_t rows, std::size_t cols, double v) {
  return RealMap{rows, cols, std::vector<double>(rows * cols, v)};
}

}  // namespace

TEST_SUITE("btff") {
  TEST_CASE("mel scale anchor and round trip") {
    CHECK(HzToMel(0.0) == 0.0);
    CHECK(std::abs(HzToMel(1000.0) - 1000.0) < 0.1);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 16000.0);
    for (int i = 0; i < 1000; ++i) {
      const double f = u(rng);
      CHECK(std::abs(MelToHz(HzToMel(f)) - f) <= 1e-9 * std::max(f, 1e-300));
    }
    CHECK_THROWS_AS(HzToMel(-1.0), Error);
    CHECK_THROWS_AS(MelToHz(-1.0), Error);
  }

  TEST_CASE("mel banks are normalized, ordered and cover the band") {
    const StftParams p;
    const BtffBanks banks(p);
    for (const MelBank* b : {&banks.full, &banks.itd, &banks.ild_sc}) {
      CHECK(b->n_mel() == 64);
      for (std::size_t i = 0; i < b->n_mel(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < b->n_bins(); ++j) {
          CHECK(b->weight(i, j) >= 0.0);
          sum += b->weight(i, j);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        if (i) CHECK(b->center_hz()[i] > b->center_hz()[i - 1]);
      }
      for (std::size_t j = 0; j < b->n_bins(); ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < b->n_mel(); ++i) col += b->weight(i, j);
        CHECK(col > 0.0);
      }
    }
    CHECK(banks.itd.last_bin() == 48);     // 1500 / 31.25
    CHECK(banks.ild_sc.first_bin() == 160);  // 5000 / 31.25
    CHECK(banks.full.last_bin() == 512);
  }

  TEST_CASE("mel map is a weighted average") {
    const MelBank bank(64, 0.0, 16000.0, 1024, 32000.0);
    const auto c = MelMap(Constant(3, bank.n_bins(), 4.5), bank);
    for (double v : c.data) CHECK(v == doctest::Approx(4.5).epsilon(1e-12));
    for (double v : MelMap(Constant(2, bank.n_bins(), 0.0), bank).data) CHECK(v == 0.0);
    RealMap one = Constant(1, bank.n_bins(), 0.0);
    one.data[100] = 1.0;
    const auto m = MelMap(one, bank);
    int touched = 0;
    for (std::size_t i = 0; i < 64; ++i) {
      CHECK(m.data[i] == doctest::Approx(bank.weight(i, 100)));
      touched += m.data[i] > 0.0;
    }
    CHECK(touched >= 1);
    CHECK(touched <= 2);
    std::mt19937_64 rng(2);
    RealMap a{2, bank.n_bins(), testing::RandomVector(rng, 2 * bank.n_bins())};
    RealMap b = a;
    for (double& v : b.data) v += std::abs(v) * 0.1 + 0.01;
    const auto ma = MelMap(a, bank), mb = MelMap(b, bank);
    for (std::size_t i = 0; i < ma.data.size(); ++i) CHECK(mb.data[i] >= ma.data[i]);
    CHECK_THROWS_AS(MelMap(Constant(1, 10, 0.0), bank), Error);
  }

  TEST_CASE("frame count and STFT basics") {
    const StftParams p;
    CHECK(FrameCount(60 * 32000, p) == 2999);
    CHECK(FrameCount(100, p) == 1);
    std::vector<double> zeros(32000, 0.0);
    const Stft z = ComputeStft(zeros, p);
    CHECK(z.rows == FrameCount(32000, p));
    CHECK(z.cols == 513);
    for (const auto& v : z.data) CHECK(v == Complex(0.0, 0.0));
    std::vector<double> tone(32000);
    for (std::size_t n = 0; n < tone.size(); ++n) tone[n] = std::cos(2 * kPi * 100 * n / 1024.0);
    const Stft t = ComputeStft(tone, p);
    for (std::size_t m = 0; m < t.rows; ++m) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < t.cols; ++k) {
        if (std::abs(t(m, k)) > std::abs(t(m, best))) best = k;
      }
      CHECK(best == 100);
    }
    StftParams bad;
    bad.hop = 2048;
    CHECK_THROWS_AS(bad.Validate(), Error);
  }

  TEST_CASE("dB magnitude floor") {
    Stft s{1, 3, {Complex(1, 0), Complex(0, 0), Complex(6, 8)}};
    const auto d = DbMagnitude(s);
    CHECK(d.data[0] == 0.0);
    CHECK(d.data[1] == doctest::Approx(-160.0));
    CHECK(d.data[2] == doctest::Approx(20.0));
  }

  TEST_CASE("velocity map stencil") {
    CHECK_THROWS_AS(VMap(Constant(1, 4, 1.0)), Error);
    for (double v : VMap(Constant(5, 3, 7.0)).data) CHECK(v == 0.0);
    RealMap ramp{6, 2, {}};
    for (std::size_t m = 0; m < 6; ++m) ramp.data.insert(ramp.data.end(), {2.5 * m, -1.0 * m});
    const auto v = VMap(ramp);
    for (std::size_t m = 0; m < 6; ++m) {
      CHECK(v(m, 0) == doctest::Approx(2.5));
      CHECK(v(m, 1) == doctest::Approx(-1.0));
    }
    RealMap spike = Constant(7, 1, 0.0);
    spike.data[3] = 4.0;
    const auto s = VMap(spike);
    CHECK(s(2, 0) == 2.0);
    CHECK(s(3, 0) == 0.0);
    CHECK(s(4, 0) == -2.0);
    CHECK(s(0, 0) == 0.0);
    CHECK(s(6, 0) == 0.0);
  }

  TEST_CASE("ITD map of a delayed 500 Hz tone") {
    const StftParams p;
    const double tau = 200e-6;
    std::vector<double> l(32000), r(32000);
    for (std::size_t n = 0; n < l.size(); ++n) {
      const double t = n / p.fs;
      r[n] = std::sin(2 * kPi * 500.0 * t);
      l[n] = std::sin(2 * kPi * 500.0 * (t - tau));
    }
    const Btff b = ExtractBtff(l, r, p);
    const BtffBanks banks(p);
    std::size_t k = 0;
    for (std::size_t i = 1; i < 64; ++i) {
      if (std::abs(banks.itd.center_hz()[i] - 500.0) < std::abs(banks.itd.center_hz()[k] - 500.0)) k = i;
    }
    for (std::size_t t = 2; t + 2 < b.frames; ++t) {
      CHECK(std::abs(b.at(t, k, kItd) - tau) <= 0.05 * tau);
    }
  }

  TEST_CASE("ITD per bin is bounded by half a period and zero at DC") {
    std::mt19937_64 rng(3);
    const StftParams p;
    const auto a = testing::RandomVector(rng, 8000), c = testing::RandomVector(rng, 8000);
    const Stft L = ComputeStft(a, p), R = ComputeStft(c, p);
    const RealMap d = ItdPerBin(L, R, 49, p.fs);
    for (std::size_t m = 0; m < d.rows; ++m) {
      CHECK(d(m, 0) == 0.0);
      for (std::size_t k = 1; k < d.cols; ++k) {
        const double w = 2 * kPi * k * p.fs / p.n_fft;
        CHECK(std::abs(d(m, k)) <= kPi / w + 1e-15);
      }
    }
    const RealMap same = ItdPerBin(L, L, 49, p.fs);
    for (double v : same.data) CHECK(v == 0.0);
  }

  TEST_CASE("BTFF of silence and of identical channels") {
    std::vector<double> zeros(16000, 0.0);
    const Btff s = ExtractBtff(zeros, zeros);
    for (std::size_t t = 0; t < s.frames; ++t) {
      for (std::size_t k = 0; k < kMelBins; ++k) {
        for (std::size_t ch : {kMsLeft, kMsRight, kScLeft, kScRight}) {
          CHECK(s.at(t, k, ch) == doctest::Approx(-160.0));
        }
        for (std::size_t ch : {kVLeft, kVRight, kItd, kIld}) CHECK(s.at(t, k, ch) == 0.0);
      }
    }
    std::mt19937_64 rng(4);
    const auto x = testing::RandomVector(rng, 16000);
    const Btff b = ExtractBtff(x, x);
    for (std::size_t t = 0; t < b.frames; ++t) {
      for (std::size_t k = 0; k < kMelBins; ++k) {
        CHECK(b.at(t, k, kItd) == 0.0);
        CHECK(b.at(t, k, kIld) == 0.0);
        CHECK(b.at(t, k, kMsLeft) == b.at(t, k, kMsRight));
      }
    }
  }

  TEST_CASE("doubling the right channel gives +6.02 dB ILD in band") {
    std::mt19937_64 rng(5);
    const auto x = testing::RandomVector(rng, 16000, 0.2);
    std::vector<double> y(x);
    for (double& v : y) v *= 2.0;
    const Btff b = ExtractBtff(x, y);
    for (std::size_t t = 0; t < b.frames; ++t) {
      for (std::size_t k = 0; k < kMelBins; ++k) {
        CHECK(std::abs(b.at(t, k, kIld) - 20.0 * std::log10(2.0)) < 1e-9);
      }
    }
  }

  TEST_CASE("channel swap swaps ear maps and negates ITD and ILD exactly") {
    std::mt19937_64 rng(6);
    const auto l = testing::RandomVector(rng, 20000), r = testing::RandomVector(rng, 20000);
    const Btff a = ExtractBtff(l, r), b = ExtractBtff(r, l);
    REQUIRE(a.frames == b.frames);
    for (std::size_t t = 0; t < a.frames; ++t) {
      for (std::size_t k = 0; k < kMelBins; ++k) {
        CHECK(a.at(t, k, kMsLeft) == b.at(t, k, kMsRight));
        CHECK(a.at(t, k, kVLeft) == b.at(t, k, kVRight));
        CHECK(a.at(t, k, kScLeft) == b.at(t, k, kScRight));
        CHECK(a.at(t, k, kItd) == -b.at(t, k, kItd));
        CHECK(a.at(t, k, kIld) == -b.at(t, k, kIld));
      }
    }
    for (double v : a.data) CHECK(std::isfinite(v));
    CHECK_THROWS_AS(ExtractBtff(l, std::vector<double>(100, 0.0)), Error);
  }

  TEST_CASE("spectral-cue map shows a notch") {
    // White noise through a two-tap comb with a null at 8.5 kHz.
    const StftParams p;
    std::mt19937_64 rng(7);
    const auto x = testing::RandomVector(rng, 64000);
    const double w0 = 2 * kPi * 8500.0 / p.fs;
    std::vector<double> y(x.size());
    for (std::size_t n = 2; n < x.size(); ++n) y[n] = x[n] - 2 * std::cos(w0) * x[n - 1] + x[n - 2];
    const Btff b = ExtractBtff(y, y, p);
    const BtffBanks banks(p);
    std::size_t notch = 0, far = 0;
    for (std::size_t i = 0; i < 64; ++i) {
      if (std::abs(banks.ild_sc.center_hz()[i] - 8500.0) < std::abs(banks.ild_sc.center_hz()[notch] - 8500.0)) notch = i;
      if (std::abs(banks.ild_sc.center_hz()[i] - 13000.0) < std::abs(banks.ild_sc.center_hz()[far] - 13000.0)) far = i;
    }
    double dip = 0.0, ref = 0.0;
    for (std::size_t t = 0; t < b.frames; ++t) {
      dip += b.at(t, notch, kScLeft);
      ref += b.at(t, far, kScLeft);
    }
    CHECK(ref - dip > 10.0 * static_cast<double>(b.frames));
  }

  TEST_CASE("binary and CSV files") {
    testing::TempDir tmp;
    std::mt19937_64 rng(8);
    const auto l = testing::RandomVector(rng, 8000), r = testing::RandomVector(rng, 8000);
    Btff b = ExtractBtff(l, r);
    SaveBtff(tmp / "x.bin", b);
    CHECK(std::filesystem::file_size(tmp / "x.bin") == 20 + b.data.size() * 4);
    const Btff c = LoadBtff(tmp / "x.bin");
    CHECK(c.frames == b.frames);
    CHECK(c.frame_hop_s == doctest::Approx(0.02));
    for (std::size_t i = 0; i < b.data.size(); ++i) {
      CHECK(c.data[i] == static_cast<double>(static_cast<float>(b.data[i])));
    }
    const auto files = SaveBtffCsv(tmp / "x", b);
    CHECK(files.size() == 8);
    CHECK(files[4] == tmp / "x_itd.csv");
    std::ofstream(tmp / "bad.bin") << "BTFX";
    CHECK_THROWS_AS(LoadBtff(tmp / "bad.bin"), Error);
    Standardize(b);
    for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
      double mean = 0.0;
      for (std::size_t t = 0; t < b.frames; ++t) {
        for (std::size_t k = 0; k < kMelBins; ++k) mean += b.at(t, k, ch);
      }
      CHECK(std::abs(mean / (b.frames * kMelBins)) < 1e-9);
    }
  }
}
