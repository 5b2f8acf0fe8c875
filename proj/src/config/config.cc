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

#include "config/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "common/error.h"
#include "json.hpp"

namespace biseld::config {
namespace {

using Json = nlohmann::ordered_json;

// Reads one JSON object, remembering which keys were consumed.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InvalidArgument(Where("") + "expected an object");
  }

  template <typename T>
  void Get(const char* key, T& out) {
    const Json* v = Find(key);
    if (!v) return;
    try {
      out = v->get<T>();
    } catch (const Json::exception&) {
      throw InvalidArgument(Where(key) + "wrong type");
    }
  }

  void GetOptional(const char* key, std::optional<double>& out) {
    const Json* v = Find(key);
    if (!v) return;
    if (v->is_null()) {
      out.reset();
    } else if (v->is_number()) {
      out = v->get<double>();
    } else {
      throw InvalidArgument(Where(key) + "expected a number or null");
    }
  }

  void GetOptional(const char* key, std::optional<std::size_t>& out) {
    const Json* v = Find(key);
    if (!v) return;
    if (v->is_null()) {
      out.reset();
    } else if (v->is_number_unsigned()) {
      out = v->get<std::size_t>();
    } else {
      throw InvalidArgument(Where(key) + "expected a non-negative integer or null");
    }
  }

  std::optional<Section> Sub(const char* key) {
    const Json* v = Find(key);
    if (!v) return std::nullopt;
    return Section(*v, Child(key));
  }

  const Json* Raw(const char* key) { return Find(key); }

  void Finish() const {
    for (const auto& [k, _] : j_.items()) {
      if (!seen_.count(k)) throw InvalidArgument(Where(k) + "unknown key");
    }
  }

  std::string Child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  std::string Where(const std::string& key) const {
    return "field '" + Child(key) + "': ";
  }

 private:
  const Json* Find(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void Require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw InvalidArgument("field '" + field + "': " + what);
}

}  // namespace

void ToolConfig::Validate() const {
  Require(hrtf.fs > 0.0, "hrtf.fs", "must be positive");
  Require(hrtf.window.pre_peak_ms > 0.0, "hrtf.pre_peak_ms", "must be positive");
  Require(hrtf.window.min_post_peak_ms > 0.0, "hrtf.min_post_peak_ms", "must be positive");
  Require(hrtf.window.pad_to > 0, "hrtf.pad_to", "must be positive");
  Require(hrtf.geometry.head_radius_m >= 0.0, "hrtf.head_radius_m", "must be >= 0");
  Require(hrtf.geometry.speed_of_sound > 0.0, "hrtf.speed_of_sound", "must be positive");
  Require(!hrtf.shift || *hrtf.shift < hrtf.window.pad_to, "hrtf.shift", "must be below pad_to");
  Require(cues.itd.max_lag_us > 0.0, "cues.max_lag_us", "must be positive");
  Require(cues.itd.lpf_cutoff_hz > 0.0, "cues.lpf_cutoff_hz", "must be positive");
  Require(cues.itd.upsample >= 1, "cues.upsample", "must be >= 1");
  Require(cues.itd.lpf_taps % 2 == 1, "cues.lpf_taps", "must be odd");
  Require(cues.ild_pad > 0, "cues.ild_pad", "must be positive");
  Require(cues.wideband_lo_hz >= 0.0 && cues.wideband_lo_hz < cues.wideband_hi_hz,
          "cues.wideband_hz", "needs 0 <= lo < hi");
  Require(cues.prtf_window_ms > 0.0, "cues.prtf_window_ms", "must be positive");
  Require(cues.feature_band.lo_hz < cues.feature_band.hi_hz, "cues.feature_band_hz",
          "needs lo < hi");
  Require(cues.min_prominence_db >= 0.0, "cues.min_prominence_db", "must be >= 0");
  try {
    stft.Validate();
  } catch (const Error& e) {
    throw InvalidArgument(std::string("field 'btff': ") + e.what());
  }
  Require(bands.itd_hi_hz > 0.0 && bands.itd_hi_hz <= stft.fs / 2.0, "btff.itd_hi_hz",
          "must lie in (0, fs/2]");
  Require(bands.ild_sc_lo_hz >= 0.0 && bands.ild_sc_lo_hz < stft.fs / 2.0,
          "btff.ild_sc_lo_hz", "must lie in [0, fs/2)");
  try {
    EffectiveSynth().Validate();
  } catch (const Error& e) {
    throw InvalidArgument(std::string("field 'synth': ") + e.what());
  }
  try {
    speaker.tsp.Validate();
  } catch (const Error& e) {
    throw InvalidArgument(std::string("field 'speaker.tsp': ") + e.what());
  }
  Require(speaker.v_eg > 0.0, "speaker.v_eg", "must be positive");
  Require(speaker.v_box_cc > 0.0, "speaker.v_box_cc", "must be positive");
  Require(speaker.distance_m > 0.0, "speaker.distance_m", "must be positive");
  Require(speaker.air.rho > 0.0 && speaker.air.c > 0.0, "speaker.air", "must be positive");
  Require(speaker.points >= 3, "speaker.points", "must be >= 3");
  Require(speaker.f_lo_hz > 0.0 && speaker.f_lo_hz < speaker.f_hi_hz, "speaker.f_hz",
          "needs 0 < lo < hi");
  Require(speaker.drop_db > 0.0, "speaker.drop_db", "must be positive");
  Require(metrics.frames_per_segment > 0, "metrics.frames_per_segment", "must be positive");
  Require(metrics.angle_threshold_deg > 0.0 && metrics.angle_threshold_deg <= 180.0,
          "metrics.angle_threshold_deg", "must lie in (0, 180]");
  Require(detection_threshold >= 0.0 && detection_threshold < 1.0,
          "inference.threshold", "must lie in [0, 1)");
  Require(vam_relative_step > 0.0, "vam.relative_step", "must be positive");
}

dataset::SynthConfig ToolConfig::EffectiveSynth() const {
  dataset::SynthConfig s = synth;
  s.seed = seed;
  s.hrir_dir = hrir_dir;
  s.hrir_fs = static_cast<int>(std::lround(hrtf.fs));
  return s;
}

ToolConfig ToolConfig::FromJson(const std::string& json_text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, source + ": " + e.what());
  }
  ToolConfig c;
  try {
    Section root(j, "");
    root.Get("seed", c.seed);
    if (auto s = root.Sub("paths")) {
      s->Get("hrir_dir", c.hrir_dir);
      s->Finish();
    }
    if (auto s = root.Sub("hrtf")) {
      s->Get("fs", c.hrtf.fs);
      s->Get("hrir_length", c.hrir_length);
      s->Get("pre_peak_ms", c.hrtf.window.pre_peak_ms);
      s->Get("min_post_peak_ms", c.hrtf.window.min_post_peak_ms);
      s->Get("pad_to", c.hrtf.window.pad_to);
      s->Get("head_radius_m", c.hrtf.geometry.head_radius_m);
      s->Get("speed_of_sound", c.hrtf.geometry.speed_of_sound);
      s->GetOptional("shift", c.hrtf.shift);
      s->Finish();
    }
    if (auto s = root.Sub("cues")) {
      s->Get("max_lag_us", c.cues.itd.max_lag_us);
      s->Get("lpf_cutoff_hz", c.cues.itd.lpf_cutoff_hz);
      s->Get("upsample", c.cues.itd.upsample);
      s->Get("lpf_taps", c.cues.itd.lpf_taps);
      s->Get("ild_pad", c.cues.ild_pad);
      s->Get("wideband_lo_hz", c.cues.wideband_lo_hz);
      s->Get("wideband_hi_hz", c.cues.wideband_hi_hz);
      s->Get("narrowband_hz", c.cues.narrowband_hz);
      s->Get("prtf_window_ms", c.cues.prtf_window_ms);
      s->Get("feature_lo_hz", c.cues.feature_band.lo_hz);
      s->Get("feature_hi_hz", c.cues.feature_band.hi_hz);
      s->Get("min_prominence_db", c.cues.min_prominence_db);
      s->Get("hpd_hz", c.cues.hpd_hz);
      s->Finish();
    }
    if (auto s = root.Sub("btff")) {
      s->Get("fs", c.stft.fs);
      s->Get("win_length", c.stft.win_length);
      s->Get("hop", c.stft.hop);
      s->Get("n_fft", c.stft.n_fft);
      s->Get("itd_hi_hz", c.bands.itd_hi_hz);
      s->Get("ild_sc_lo_hz", c.bands.ild_sc_lo_hz);
      s->Get("standardize", c.standardize);
      s->Finish();
    }
    if (const Json* s = root.Raw("synth")) {
      if (!s->is_object()) throw InvalidArgument("field 'synth': expected an object");
      for (const char* k : {"seed", "hrir_dir", "hrir_fs"}) {
        if (s->contains(k)) {
          throw InvalidArgument(std::string("field 'synth.") + k +
                                "': set through seed, paths.hrir_dir or hrtf.fs");
        }
      }
      Json full = Json::parse(c.synth.ToJson());
      for (const auto& [k, v] : s->items()) full[k] = v;
      full["seed"] = c.seed;
      c.synth = dataset::SynthConfig::FromJson(full.dump());
    }
    if (auto s = root.Sub("speaker")) {
      if (const Json* t = s->Raw("tsp")) c.speaker.tsp = speaker::TspSet::FromJson(t->dump());
      s->Get("v_eg", c.speaker.v_eg);
      s->Get("v_box_cc", c.speaker.v_box_cc);
      s->Get("distance_m", c.speaker.distance_m);
      s->Get("rho", c.speaker.air.rho);
      s->Get("c", c.speaker.air.c);
      s->Get("points", c.speaker.points);
      s->Get("f_lo_hz", c.speaker.f_lo_hz);
      s->Get("f_hi_hz", c.speaker.f_hi_hz);
      s->Get("drop_db", c.speaker.drop_db);
      s->GetOptional("ref_freq_hz", c.speaker.ref_freq_hz);
      s->Finish();
    }
    if (auto s = root.Sub("metrics")) {
      s->Get("frames_per_segment", c.metrics.frames_per_segment);
      s->Get("angle_threshold_deg", c.metrics.angle_threshold_deg);
      s->Finish();
    }
    if (auto s = root.Sub("inference")) {
      s->Get("threshold", c.detection_threshold);
      s->Finish();
    }
    if (auto s = root.Sub("vam")) {
      s->Get("relative_step", c.vam_relative_step);
      s->Finish();
    }
    root.Finish();
    c.Validate();
  } catch (const Error& e) {
    throw Error(e.kind(), source + ": " + e.what());
  }
  return c;
}

ToolConfig ToolConfig::Load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return FromJson(ss.str(), path);
}

std::string ToolConfig::ToJson() const {
  Json j;
  j["seed"] = seed;
  j["paths"] = {{"hrir_dir", hrir_dir}};
  Json h;
  h["fs"] = hrtf.fs;
  h["hrir_length"] = hrir_length;
  h["pre_peak_ms"] = hrtf.window.pre_peak_ms;
  h["min_post_peak_ms"] = hrtf.window.min_post_peak_ms;
  h["pad_to"] = hrtf.window.pad_to;
  h["head_radius_m"] = hrtf.geometry.head_radius_m;
  h["speed_of_sound"] = hrtf.geometry.speed_of_sound;
  h["shift"] = hrtf.shift ? Json(*hrtf.shift) : Json(nullptr);
  j["hrtf"] = h;
  Json q;
  q["max_lag_us"] = cues.itd.max_lag_us;
  q["lpf_cutoff_hz"] = cues.itd.lpf_cutoff_hz;
  q["upsample"] = cues.itd.upsample;
  q["lpf_taps"] = cues.itd.lpf_taps;
  q["ild_pad"] = cues.ild_pad;
  q["wideband_lo_hz"] = cues.wideband_lo_hz;
  q["wideband_hi_hz"] = cues.wideband_hi_hz;
  q["narrowband_hz"] = cues.narrowband_hz;
  q["prtf_window_ms"] = cues.prtf_window_ms;
  q["feature_lo_hz"] = cues.feature_band.lo_hz;
  q["feature_hi_hz"] = cues.feature_band.hi_hz;
  q["min_prominence_db"] = cues.min_prominence_db;
  q["hpd_hz"] = cues.hpd_hz;
  j["cues"] = q;
  Json b;
  b["fs"] = stft.fs;
  b["win_length"] = stft.win_length;
  b["hop"] = stft.hop;
  b["n_fft"] = stft.n_fft;
  b["itd_hi_hz"] = bands.itd_hi_hz;
  b["ild_sc_lo_hz"] = bands.ild_sc_lo_hz;
  b["standardize"] = standardize;
  j["btff"] = b;
  Json s = Json::parse(synth.ToJson());
  for (const char* k : {"seed", "hrir_dir", "hrir_fs"}) s.erase(k);
  j["synth"] = s;
  Json sp;
  sp["tsp"] = Json::parse(speaker.tsp.ToJson());
  sp["v_eg"] = speaker.v_eg;
  sp["v_box_cc"] = speaker.v_box_cc;
  sp["distance_m"] = speaker.distance_m;
  sp["rho"] = speaker.air.rho;
  sp["c"] = speaker.air.c;
  sp["points"] = speaker.points;
  sp["f_lo_hz"] = speaker.f_lo_hz;
  sp["f_hi_hz"] = speaker.f_hi_hz;
  sp["drop_db"] = speaker.drop_db;
  sp["ref_freq_hz"] = speaker.ref_freq_hz ? Json(*speaker.ref_freq_hz) : Json(nullptr);
  j["speaker"] = sp;
  j["metrics"] = {{"frames_per_segment", metrics.frames_per_segment},
                  {"angle_threshold_deg", metrics.angle_threshold_deg}};
  j["inference"] = {{"threshold", detection_threshold}};
  j["vam"] = {{"relative_step", vam_relative_step}};
  return j.dump(2);
}

}  // namespace biseld::config
