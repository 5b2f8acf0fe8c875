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

#include <fstream>
#include <string>

#include "common/error.h"
#include "config/config.h"
#include "doctest.h"
#include "json.hpp"
#include "support/oracles.h"

namespace {

using namespace biseld;
using biseld::config::ToolConfig;

std::string MessageOf(const std::string& text) {
  try {
    ToolConfig::FromJson(text, "cfg.json");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults survive a JSON round trip") {
    const ToolConfig a;
    CHECK_NOTHROW(a.Validate());
    const ToolConfig b = ToolConfig::FromJson(a.ToJson());
    CHECK(b.ToJson() == a.ToJson());
    CHECK(ToolConfig::FromJson("{}").ToJson() == a.ToJson());
    CHECK(a.seed == 2024);
    CHECK(a.stft.hop == 640);
    CHECK(a.synth.fs == 32000);
    CHECK(a.speaker.v_box_cc == 800.0);
    CHECK(a.metrics.angle_threshold_deg == 20.0);
    CHECK(a.detection_threshold == 0.5);
  }

  TEST_CASE("values are read from every section") {
    const ToolConfig c = ToolConfig::FromJson(R"({
      "seed": 7,
      "paths": {"hrir_dir": "/data/hrir"},
      "hrtf": {"fs": 44100, "pad_to": 8192},
      "btff": {"hop": 320, "standardize": true},
      "synth": {"snr_db": 20, "noise_classes": ["park"]},
      "speaker": {"v_eg": 1.0, "ref_freq_hz": 1000},
      "metrics": {"angle_threshold_deg": 15},
      "inference": {"threshold": 0.3},
      "vam": {"relative_step": 0.01}
    })");
    CHECK(c.seed == 7);
    CHECK(c.hrir_dir == "/data/hrir");
    CHECK(c.hrtf.fs == 44100.0);
    CHECK(c.stft.hop == 320);
    CHECK(c.standardize);
    CHECK(*c.synth.snr_db == 20.0);
    CHECK(c.speaker.v_eg == 1.0);
    CHECK(*c.speaker.ref_freq_hz == 1000.0);
    CHECK(c.metrics.angle_threshold_deg == 15.0);
    CHECK(c.detection_threshold == 0.3);
    CHECK(c.vam_relative_step == 0.01);
  }

  TEST_CASE("seed and paths propagate into the dataset settings") {
    const ToolConfig c = ToolConfig::FromJson(R"({"seed": 99, "paths": {"hrir_dir": "h"}, "hrtf": {"fs": 44100}})");
    const auto s = c.EffectiveSynth();
    CHECK(s.seed == 99);
    CHECK(s.hrir_dir == "h");
    CHECK(s.hrir_fs == 44100);
    CHECK(MessageOf(R"({"synth": {"seed": 3}})").find("synth.seed") != std::string::npos);
  }

  TEST_CASE("errors name the file and the offending field") {
    const std::string unknown = MessageOf(R"({"btff": {"hopp": 3}})");
    CHECK(unknown.find("cfg.json") != std::string::npos);
    CHECK(unknown.find("btff.hopp") != std::string::npos);
    CHECK(MessageOf(R"({"nonsense": 1})").find("nonsense") != std::string::npos);
    CHECK(MessageOf(R"({"btff": {"hop": "ten"}})").find("btff.hop") != std::string::npos);
    CHECK(MessageOf(R"({"btff": {"hop": 4096}})") != "");
    CHECK(MessageOf(R"({"speaker": {"v_eg": -1}})") != "");
    CHECK(MessageOf("[1, 2]") != "");
    CHECK(MessageOf("{") != "");
    CHECK_THROWS_AS(ToolConfig::Load("/nonexistent/cfg.json"), Error);
  }

  TEST_CASE("loading from disk") {
    testing::TempDir tmp;
    std::ofstream(tmp / "c.json") << R"({"seed": 5})";
    CHECK(ToolConfig::Load(tmp / "c.json").seed == 5);
    std::ofstream(tmp / "bad.json") << R"({"seed": 5, "x": {}})";
    try {
      ToolConfig::Load(tmp / "bad.json");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(tmp / "bad.json") != std::string::npos);
    }
  }
}
