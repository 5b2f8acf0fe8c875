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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "common/error.h"
#include "cues/cues.h"
#include "dataset/synth.h"
#include "doctest.h"
#include "dsp/fft.h"
#include "dsp/wav.h"
#include "metrics/labels.h"
#include "support/oracles.h"

namespace {

using namespace biseld;
using namespace biseld::dataset;
using Stereo = std::array<std::vector<double>, 2>;

double JointRms(const Stereo& s) {
  double e = 0.0;
  for (const auto& ch : s) {
    for (double v : ch) e += v * v;
  }
  return std::sqrt(e / static_cast<double>(s[0].size() + s[1].size()));
}

hrtf::HrirPair Impulses(std::size_t n, std::size_t left_at, std::size_t right_at, double fs,
                        double right_gain = 1.0) {
  hrtf::HrirPair h;
  h.left.assign(n, 0.0);
  h.right.assign(n, 0.0);
  h.left[left_at] = 1.0;
  h.right[right_at] = right_gain;
  h.fs = fs;
  return h;
}

Inventory FakeInventory(const SynthConfig& cfg, int per_class) {
  Inventory inv;
  for (const auto& name : cfg.classes) {
    std::vector<std::string> files;
    for (int k = 1; k <= per_class; ++k) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%02d", k);
      files.push_back(name + buf + ".wav");
    }
    inv.clips.push_back(files);
  }
  return inv;
}

std::string Slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("resampling passes equal rates through and scales length") {
    std::mt19937_64 rng(1);
    const auto x = testing::RandomVector(rng, 1000);
    CHECK(ToRate(x, 32000, 32000) == x);
    CHECK(ToRate(std::vector<double>(44100 * 5, 0.0), 44100, 32000).size() == 160000);
  }

  TEST_CASE("spatialize through impulse HRIRs") {
    std::mt19937_64 rng(2);
    const auto x = testing::RandomVector(rng, 500);
    const auto same = Spatialize(x, Impulses(32, 0, 0, 32000), 32000);
    for (std::size_t n = 0; n < x.size(); ++n) {
      CHECK(same[0][n] == doctest::Approx(x[n]).epsilon(1e-12));
      CHECK(same[1][n] == same[0][n]);
    }
    const auto d = Spatialize(x, Impulses(32, 0, 8, 32000), 32000);
    REQUIRE(d[1].size() == x.size());
    for (std::size_t n = 0; n < 8; ++n) CHECK(std::abs(d[1][n]) < 1e-12);
    for (std::size_t n = 8; n < x.size(); ++n) CHECK(d[1][n] == doctest::Approx(x[n - 8]).epsilon(1e-12));
    CHECK_THROWS_AS(Spatialize(x, Impulses(32, 0, 0, 48000), 32000), Error);
  }

  TEST_CASE("spatialized noise from the right is louder on the right") {
    std::mt19937_64 rng(3);
    const auto x = testing::RandomVector(rng, 4096);
    const auto y = Spatialize(x, Impulses(64, 20, 2, 32000, 1.8), 32000);
    const auto l = dsp::ForwardFft(y[0], 4096, 32000.0), r = dsp::ForwardFft(y[1], 4096, 32000.0);
    CHECK(cues::IldWideband(l, r, 20.0, 16000.0) > 0.0);
  }

  TEST_CASE("mixing at a target SNR") {
    std::mt19937_64 rng(4);
    Stereo ev{testing::RandomVector(rng, 4000, 0.3), testing::RandomVector(rng, 4000, 0.2)};
    Stereo no{testing::RandomVector(rng, 4000, 0.05), testing::RandomVector(rng, 4000, 0.07)};
    for (double snr : {0.0, 20.0}) {
      double g = 0.0;
      const auto m = MixAtSnr(ev, no, snr, &g);
      Stereo scaled = ev;
      for (auto& ch : scaled) {
        for (double& v : ch) v *= g;
      }
      const double ratio = JointRms(scaled) / JointRms(no);
      CHECK(ratio == doctest::Approx(std::pow(10.0, snr / 20.0)).epsilon(1e-9));
      for (int c = 0; c < 2; ++c) {
        for (std::size_t n = 0; n < 4000; ++n) CHECK(m[c][n] == scaled[c][n] + no[c][n]);
      }
    }
    Stereo silent{std::vector<double>(4000, 0.0), std::vector<double>(4000, 0.0)};
    CHECK_THROWS_AS(MixAtSnr(silent, no, 0.0), Error);
    CHECK_THROWS_AS(MixAtSnr(ev, silent, 0.0), Error);
  }

  TEST_CASE("activity parsing and frame selection") {
    testing::TempDir tmp;
    std::ofstream(tmp / "a.txt") << "0.5 2.0\n\n3.05,4.2\n";
    const auto act = ReadActivity(tmp / "a.txt");
    REQUIRE(act.size() == 2);
    CHECK(act[1].first == 3.05);
    const auto frames = ActiveFrames(act, 50);
    CHECK(frames.front() == 5);
    CHECK(std::count(frames.begin(), frames.end(), 19) == 1);
    CHECK(std::count(frames.begin(), frames.end(), 20) == 0);
    CHECK(std::count(frames.begin(), frames.end(), 30) == 1);
    CHECK(frames.back() == 41);
    CHECK(std::is_sorted(frames.begin(), frames.end()));
    CHECK(ActiveFrames({}, 50).size() == 50);
    std::ofstream(tmp / "bad.txt") << "1.0\n";
    CHECK_THROWS_AS(ReadActivity(tmp / "bad.txt"), Error);
  }

  TEST_CASE("mixture concatenates clips and labels their active frames") {
    std::mt19937_64 rng(5);
    std::vector<SlotEvent> events;
    for (int s = 0; s < 12; ++s) {
      SlotEvent e;
      e.audio = {testing::RandomVector(rng, 100), testing::RandomVector(rng, 100)};
      e.class_index = (s * 5) % 12;
      e.direction = hrtf::Direction::Normalized(30 * s, s % 2 ? 30 : 0);
      if (s == 3) e.activity = {{0.0, 0.05}};
      if (s == 4) e.activity = {{0.2, 0.3}};
      events.push_back(e);
    }
    const auto m = BuildMixture(events, nullptr, std::nullopt, 1000, 1);
    REQUIRE(m.audio.channels[0].size() == 1200);
    for (int s = 0; s < 12; ++s) {
      for (int c = 0; c < 2; ++c) {
        for (int n = 0; n < 100; ++n) CHECK(m.audio.channels[c][s * 100 + n] == events[s].audio[c][n]);
      }
    }
    CHECK(m.labels.size() == 11);
    std::map<int, int> per_class;
    for (const auto& row : m.labels) ++per_class[row.class_index];
    for (const auto& [c, n] : per_class) CHECK(n <= 600);
    CHECK(m.labels[3].azimuth_deg == 90);
    CHECK(m.labels[3].elevation_deg == 30);
    events.pop_back();
    CHECK_THROWS_AS(BuildMixture(events, nullptr, std::nullopt, 1000, 1), Error);
  }

  TEST_CASE("headroom clamps the peak to -1 dBFS") {
    RenderedMixture m;
    m.audio.channels = {{0.0, 2.0, -0.5}, {-4.0, 1.0, 0.0}};
    ApplyHeadroom(m, 1.0);
    CHECK(m.scale == doctest::Approx(std::pow(10.0, -0.05) / 4.0));
    CHECK(std::abs(m.audio.channels[1][0]) == doctest::Approx(std::pow(10.0, -0.05)));
    RenderedMixture q;
    q.audio.channels = {{0.1, -0.2}, {0.0, 0.0}};
    ApplyHeadroom(q, 1.0);
    CHECK(q.scale == 1.0);
  }

  TEST_CASE("label CSV format") {
    testing::TempDir tmp;
    metrics::WriteLabels(tmp / "a.csv", {{10, 1, 30, 0}, {11, 1, 30, 0}, {12, 1, 30, 0}});
    CHECK(Slurp(tmp / "a.csv") == "10,1,30,0\n11,1,30,0\n12,1,30,0\n");
    metrics::WriteLabels(tmp / "b.csv", {});
    CHECK(Slurp(tmp / "b.csv").empty());
    std::vector<metrics::LabelRow> rows{{4, 7, -90, 0}, {4, 2, 30, 60}};
    metrics::SortRows(rows);
    metrics::WriteLabels(tmp / "c.csv", rows);
    CHECK(Slurp(tmp / "c.csv") == "4,2,30,60\n4,7,-90,0\n");
  }

  TEST_CASE("config validation and JSON") {
    SynthConfig cfg;
    CHECK_NOTHROW(cfg.Validate());
    CHECK(cfg.slots() == 12);
    SynthConfig bad = cfg;
    bad.split = {14, 3, 2};
    CHECK_THROWS_AS(bad.Validate(), Error);
    bad = cfg;
    bad.mixture_s = 50;
    CHECK_THROWS_AS(bad.Validate(), Error);
    const SynthConfig back = SynthConfig::FromJson(cfg.ToJson());
    CHECK(back.ToJson() == cfg.ToJson());
    CHECK_THROWS_AS(SynthConfig::FromJson(R"({"fs": 32000, "bogus": 1})"), Error);
  }

  TEST_CASE("default plan counts, balance, disjointness and closure") {
    SynthConfig cfg;
    const Inventory inv = FakeInventory(cfg, 20);
    const auto plan = BuildPlan(cfg, inv);
    const auto counts = CountSplits(plan).files;
    CHECK(counts.at("train") == 672);
    CHECK(counts.at("valid") == 144);
    CHECK(counts.at("test") == 144);
    CHECK(counts.at("test_h") == 36);
    CHECK(counts.at("test_v") == 12);

    std::set<std::pair<int, int>> grid;
    for (int az : cfg.azimuths) {
      for (int el : cfg.elevations) grid.insert({(az % 360 + 360) % 360, el});
    }
    std::map<std::string, std::string> split_of_clip;
    std::set<std::string> stems;
    for (const auto& m : plan) {
      CHECK(stems.insert(m.split + "/" + m.stem).second);
      REQUIRE(m.placements.size() == 12);
      std::set<int> classes;
      for (const auto& p : m.placements) {
        classes.insert(p.clip.class_index);
        const int az = static_cast<int>(std::lround(p.direction.azimuth_deg));
        const int el = static_cast<int>(std::lround(p.direction.elevation_deg));
        CHECK(grid.count({(az % 360 + 360) % 360, el}) == 1);
        if (m.split == "test_h") CHECK(el == 0);
        if (m.split == "test_v") CHECK(az == 0);
        const std::string base = m.split.rfind("test", 0) == 0 ? "test" : m.split;
        auto [it, fresh] = split_of_clip.emplace(p.clip.file, base);
        if (!fresh) CHECK(it->second == base);
      }
      CHECK(classes.size() == 12);
    }
    CHECK(split_of_clip.size() == 240);
    // Every (clip, direction) pair of a split is used exactly once.
    std::map<std::tuple<std::string, std::string, int, int>, int> uses;
    for (const auto& m : plan) {
      if (m.split != "train") continue;
      for (const auto& p : m.placements) {
        ++uses[{m.split, p.clip.file, static_cast<int>(p.direction.azimuth_deg),
                static_cast<int>(p.direction.elevation_deg)}];
      }
    }
    CHECK(uses.size() == 12 * 14 * 48);
    for (const auto& [k, n] : uses) CHECK(n == 1);
  }

  TEST_CASE("plan is deterministic and names follow the conventions") {
    SynthConfig cfg;
    const Inventory inv = FakeInventory(cfg, 20);
    const auto a = BuildPlan(cfg, inv), b = BuildPlan(cfg, inv);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].stem == b[i].stem);
      for (std::size_t s = 0; s < 12; ++s) {
        CHECK(a[i].placements[s].clip.file == b[i].placements[s].clip.file);
        CHECK(a[i].placements[s].direction.azimuth_deg == b[i].placements[s].direction.azimuth_deg);
      }
    }
    std::set<std::string> stems;
    for (const auto& m : a) stems.insert(m.stem);
    CHECK(stems.count("train_mix001") == 1);
    CHECK(stems.count("train_mix672") == 1);
    CHECK(stems.count("test-a120e+00_mix1") == 1);
    CHECK(stems.count("test-a000e+60_mix3") == 1);

    SynthConfig other = cfg;
    other.seed = cfg.seed + 1;
    const auto c = BuildPlan(other, inv);
    bool differs = false;
    for (std::size_t i = 0; i < a.size() && !differs; ++i) {
      differs = a[i].placements[0].clip.file != c[i].placements[0].clip.file;
    }
    CHECK(differs);

    SynthConfig noisy = cfg;
    noisy.snr_db = 10.0;
    Inventory ninv = inv;
    ninv.noise["airport"] = {"airport.wav"};
    const auto n = BuildPlan(noisy, ninv);
    CHECK(CountSplits(n).files.at("train") == 672);
    std::set<std::string> nstems;
    for (const auto& m : n) {
      CHECK(m.noise == "airport");
      CHECK(m.noise_offset >= 0.0);
      CHECK(m.noise_offset < 1.0);
      nstems.insert(m.stem);
    }
    CHECK(nstems.count("train_airport_mix227") == 1);
    CHECK(nstems.count("test-a120e+00_airport_mix1") == 1);
  }

  TEST_CASE("insufficient clips are rejected") {
    SynthConfig cfg;
    CHECK_THROWS_AS(BuildPlan(cfg, FakeInventory(cfg, 19)), Error);
    testing::TempDir tmp;
    testing::WriteSyntheticEvents(tmp.path(), cfg.classes, 3, 800, 0.1, 1);
    CHECK_THROWS_AS(ScanInventory(cfg, tmp.path(), ""), Error);
    SynthConfig noisy = cfg;
    noisy.samples_per_class = 3;
    noisy.split = {1, 1, 1};
    noisy.snr_db = 0.0;
    CHECK_THROWS_AS(ScanInventory(noisy, tmp.path(), ""), Error);
    CHECK_THROWS_AS(ScanInventory(noisy, tmp.path(), tmp / "missing"), Error);
  }

  TEST_CASE("a small dataset renders complete, aligned pairs") {
    testing::TempDir tmp;
    SynthConfig cfg;
    cfg.fs = 800;
    cfg.hrir_fs = 4800;
    cfg.samples_per_class = 3;
    cfg.split = {1, 1, 1};
    cfg.azimuths = {0, 90, 270};
    cfg.elevations = {0, 30};
    cfg.segment_s = 1;
    cfg.mixture_s = 12;
    cfg.hrir_dir = tmp / "hrir";
    cfg.snr_db = 10.0;
    std::filesystem::create_directories(cfg.hrir_dir);
    testing::WriteSyntheticHrirDb(cfg.hrir_dir, {{0, 90, 270}, {0, 30}, 4800.0, 64});
    testing::WriteSyntheticEvents(tmp / "events", cfg.classes, 3, 800, 1.0, 7);
    std::filesystem::create_directories(tmp / "noise");
    testing::WriteNoiseWav(tmp / "noise/park.wav", 800, 20.0, 9);

    const auto res = BuildDataset(cfg, tmp / "events", tmp / "noise", tmp / "out");
    CHECK(res.counts.files.at("train") == 6);
    CHECK(res.counts.files.at("test_h") == 3);
    CHECK(res.counts.files.at("test_v") == 2);
    std::size_t wavs = 0, csvs = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(tmp / "out")) {
      const auto ext = e.path().extension();
      if (ext == ".wav") {
        ++wavs;
        auto twin = e.path();
        twin.replace_extension(".csv");
        CHECK(std::filesystem::exists(twin));
        const auto audio = dsp::ReadWav(e.path());
        CHECK(audio.fs == 800);
        CHECK(audio.channels.size() == 2);
        CHECK(audio.frames() == 9600);
        CHECK(e.path().filename().string().find("park_mix") != std::string::npos);
      } else if (ext == ".csv") {
        ++csvs;
        for (const auto& row : metrics::ReadLabels(e.path())) {
          CHECK(row.frame >= 0);
          CHECK(row.frame < 120);
          CHECK(row.class_index >= 0);
          CHECK(row.class_index < 12);
        }
      }
    }
    CHECK(wavs == 6 + 6 + 6 + 3 + 2);
    CHECK(csvs == wavs);
    const std::string first = Slurp(res.manifest_path);
    BuildDataset(cfg, tmp / "events", tmp / "noise", tmp / "again");
    CHECK(Slurp(tmp / "again/manifest.json") == first);
  }
}
