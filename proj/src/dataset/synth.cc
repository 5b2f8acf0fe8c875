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

#include "dataset/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "common/error.h"
#include "common/parallel.h"
#include "dsp/fft.h"
#include "dsp/resample.h"
#include "json.hpp"

namespace biseld::dataset {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Stereo = std::array<std::vector<double>, 2>;

// Portable draws: the standard distributions are implementation-defined.
std::size_t UniformIndex(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return static_cast<std::size_t>(v % n);
}

double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void Shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[UniformIndex(rng, i)]);
}

std::string DirectionTag(const hrtf::Direction& d) {
  std::string s = hrtf::FormatHrirFilename(d);
  return s.substr(0, s.size() - 4);
}

double JointRms(const Stereo& x) {
  double acc = 0.0;
  std::size_t n = 0;
  for (const auto& ch : x) {
    for (double v : ch) acc += v * v;
    n += ch.size();
  }
  return n ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
}

std::vector<double> Mono(const dsp::Audio& a) {
  std::vector<double> m(a.frames(), 0.0);
  for (const auto& ch : a.channels) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += ch[i];
  }
  for (double& v : m) v /= static_cast<double>(a.channels.size());
  return m;
}

std::string Stem(const std::string& file) { return fs::path(file).stem().string(); }

}  // namespace

const std::vector<std::string>& DefaultClasses() {
  static const std::vector<std::string> classes = {
      "alarm", "baby", "cough", "crash", "dog", "female_scream",
      "female_speech", "fire", "knock", "male_scream", "male_speech", "phone"};
  return classes;
}

void SynthConfig::Validate() const {
  auto fail = [](const std::string& m) { throw InvalidArgument("synth config: " + m); };
  if (fs <= 0) fail("fs must be positive");
  if (classes.size() != 12) fail("exactly 12 classes are required");
  for (const auto& c : classes) {
    if (c.empty() || c.find_first_of("/\\") != std::string::npos) fail("bad class name '" + c + "'");
  }
  if (split.size() != 3 || std::any_of(split.begin(), split.end(), [](int v) { return v <= 0; })) {
    fail("split must hold three positive counts");
  }
  if (split[0] + split[1] + split[2] != samples_per_class) fail("split must sum to samples_per_class");
  if (azimuths.empty() || elevations.empty()) fail("direction grid is empty");
  for (int el : elevations) {
    if (el < -90 || el > 90) fail("elevation outside [-90, 90]");
  }
  if (std::find(elevations.begin(), elevations.end(), 0) == elevations.end()) {
    fail("elevations must include 0 for the horizontal test split");
  }
  if (segment_s <= 0 || mixture_s != 12 * segment_s) fail("mixture_s must equal 12 x segment_s");
  if (snr_db && !std::isfinite(*snr_db)) fail("snr_db must be finite");
  if (hrir_fs <= 0) fail("hrir_fs must be positive");
  if (!(headroom_db >= 0.0)) fail("headroom_db must be >= 0");
}

SynthConfig SynthConfig::FromJson(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("synth config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::kParse, "synth config: expected an object");
  SynthConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "fs") c.fs = v.get<int>();
      else if (key == "classes") c.classes = v.get<std::vector<std::string>>();
      else if (key == "samples_per_class") c.samples_per_class = v.get<int>();
      else if (key == "split") c.split = v.get<std::vector<int>>();
      else if (key == "azimuths") c.azimuths = v.get<std::vector<int>>();
      else if (key == "elevations") c.elevations = v.get<std::vector<int>>();
      else if (key == "segment_s") c.segment_s = v.get<int>();
      else if (key == "mixture_s") c.mixture_s = v.get<int>();
      else if (key == "snr_db") c.snr_db = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (key == "noise_classes") c.noise_classes = v.get<std::vector<std::string>>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "hrir_dir") c.hrir_dir = v.get<std::string>();
      else if (key == "hrir_fs") c.hrir_fs = v.get<int>();
      else if (key == "headroom_db") c.headroom_db = v.get<double>();
      else throw InvalidArgument("synth config: unknown key " + key);
    }
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("synth config: ") + e.what());
  }
  c.Validate();
  return c;
}

std::string SynthConfig::ToJson() const {
  Json j;
  j["fs"] = fs;
  j["classes"] = classes;
  j["samples_per_class"] = samples_per_class;
  j["split"] = split;
  j["azimuths"] = azimuths;
  j["elevations"] = elevations;
  j["segment_s"] = segment_s;
  j["mixture_s"] = mixture_s;
  j["snr_db"] = snr_db ? Json(*snr_db) : Json(nullptr);
  j["noise_classes"] = noise_classes;
  j["seed"] = seed;
  j["hrir_dir"] = hrir_dir;
  j["hrir_fs"] = hrir_fs;
  j["headroom_db"] = headroom_db;
  return j.dump(2);
}

std::vector<double> ToRate(std::span<const double> x, int fs_in, int fs_out) {
  if (fs_in <= 0 || fs_out <= 0) throw InvalidArgument("resample: rates must be positive");
  return dsp::Resample(x, fs_in, fs_out);
}

Stereo Spatialize(std::span<const double> mono, const hrtf::HrirPair& hrir, double fs) {
  hrir.Validate();
  if (hrir.fs != fs) {
    throw InvalidArgument("spatialize: HRIR rate " + std::to_string(hrir.fs) +
                          " differs from signal rate " + std::to_string(fs));
  }
  return {dsp::ConvolveSame(mono, hrir.left), dsp::ConvolveSame(mono, hrir.right)};
}

Stereo MixAtSnr(const Stereo& event, const Stereo& noise, double snr_db, double* gain) {
  for (int c = 0; c < 2; ++c) {
    if (event[c].size() != noise[c].size() || event[c].size() != event[0].size()) {
      throw InvalidArgument("mix: event and noise lengths differ");
    }
  }
  const double ne = JointRms(event), nn = JointRms(noise);
  if (!(ne > 0.0)) throw DomainError("mix: event segment is silent");
  if (!(nn > 0.0)) throw DomainError("mix: noise segment is silent");
  const double g = nn * std::pow(10.0, snr_db / 20.0) / ne;
  if (gain) *gain = g;
  Stereo out = noise;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < out[c].size(); ++i) out[c][i] += g * event[c][i];
  }
  return out;
}

std::vector<std::pair<double, double>> ReadActivity(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::vector<std::pair<double, double>> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double on, off;
    if (!(ls >> on)) continue;
    if (!(ls >> off)) throw ParseError(path, n, "expected onset and offset");
    if (!(on >= 0.0) || !(off > on)) throw ParseError(path, n, "need 0 <= onset < offset");
    out.emplace_back(on, off);
  }
  return out;
}

std::vector<int> ActiveFrames(const std::vector<std::pair<double, double>>& activity,
                              int frames_per_slot) {
  std::vector<int> frames;
  for (int j = 0; j < frames_per_slot; ++j) {
    if (activity.empty()) {
      frames.push_back(j);
      continue;
    }
    const double lo = 0.1 * j, hi = 0.1 * (j + 1);
    for (const auto& [on, off] : activity) {
      if (on < hi && off > lo) {
        frames.push_back(j);
        break;
      }
    }
  }
  return frames;
}

Inventory ScanInventory(const SynthConfig& cfg, const std::string& event_dir,
                        const std::string& noise_dir) {
  if (!fs::is_directory(event_dir)) throw IoError("event directory not found: " + event_dir);
  Inventory inv;
  inv.clips.resize(cfg.classes.size());
  for (const auto& e : fs::directory_iterator(event_dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".wav") continue;
    const std::string stem = e.path().stem().string();
    std::smatch m;
    static const std::regex re("^(.*[^0-9])([0-9]+)$");
    if (!std::regex_match(stem, m, re)) continue;
    const auto it = std::find(cfg.classes.begin(), cfg.classes.end(), m[1].str());
    if (it == cfg.classes.end()) continue;
    inv.clips[static_cast<std::size_t>(it - cfg.classes.begin())].push_back(
        e.path().filename().string());
  }
  for (std::size_t c = 0; c < inv.clips.size(); ++c) {
    auto& v = inv.clips[c];
    std::sort(v.begin(), v.end());
    if (static_cast<int>(v.size()) < cfg.samples_per_class) {
      throw InvalidArgument("synth: class " + cfg.classes[c] + " has " + std::to_string(v.size()) +
                            " clips in " + event_dir + ", needs " +
                            std::to_string(cfg.samples_per_class));
    }
    v.resize(static_cast<std::size_t>(cfg.samples_per_class));
  }
  if (!cfg.snr_db) return inv;

  if (noise_dir.empty() || !fs::is_directory(noise_dir)) {
    throw InvalidArgument("synth: snr_db is set but the noise directory is missing");
  }
  std::map<std::string, std::vector<std::string>> found;
  for (const auto& e : fs::directory_iterator(noise_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") {
      found[e.path().stem().string()].push_back(e.path().filename().string());
    } else if (e.is_directory()) {
      std::vector<std::string> files;
      for (const auto& f : fs::directory_iterator(e.path())) {
        if (f.is_regular_file() && f.path().extension() == ".wav") {
          files.push_back((e.path().filename() / f.path().filename()).string());
        }
      }
      std::sort(files.begin(), files.end());
      if (!files.empty()) found[e.path().filename().string()] = files;
    }
  }
  std::vector<std::string> wanted = cfg.noise_classes;
  if (wanted.empty()) {
    for (const auto& [name, _] : found) wanted.push_back(name);
  }
  if (wanted.empty()) throw InvalidArgument("synth: no noise files in " + noise_dir);
  for (const auto& name : wanted) {
    const auto it = found.find(name);
    if (it == found.end()) throw InvalidArgument("synth: noise class " + name + " not found");
    inv.noise[name] = it->second;
  }
  return inv;
}

std::vector<MixturePlan> BuildPlan(const SynthConfig& cfg, const Inventory& inv) {
  cfg.Validate();
  const std::size_t n_classes = cfg.classes.size();
  if (inv.clips.size() != n_classes) throw InvalidArgument("synth: inventory class count mismatch");
  std::mt19937_64 rng(cfg.seed);

  // Per-class split of the source clips.
  std::vector<std::array<std::vector<std::string>, 3>> parts(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (static_cast<int>(inv.clips[c].size()) != cfg.samples_per_class) {
      throw InvalidArgument("synth: class " + cfg.classes[c] + " needs exactly " +
                            std::to_string(cfg.samples_per_class) + " clips");
    }
    std::vector<std::string> clips = inv.clips[c];
    Shuffle(clips, rng);
    auto it = clips.begin();
    for (int s = 0; s < 3; ++s) {
      parts[c][s].assign(it, it + cfg.split[s]);
      it += cfg.split[s];
    }
  }

  std::vector<hrtf::Direction> grid;
  for (int az : cfg.azimuths) {
    for (int el : cfg.elevations) grid.push_back(hrtf::Direction::Normalized(az, el));
  }

  std::vector<std::string> noises;
  for (const auto& [name, _] : inv.noise) noises.push_back(name);
  if (noises.empty()) noises.push_back("");

  std::vector<MixturePlan> plan;
  auto finish = [&](MixturePlan& m, const std::string& noise) {
    m.noise = noise;
    if (!noise.empty()) {
      m.noise_file = UniformIndex(rng, inv.noise.at(noise).size());
      m.noise_offset = UniformUnit(rng);
    }
    plan.push_back(std::move(m));
  };
  auto slot_order = [&]() {
    std::vector<int> slots(n_classes);
    for (std::size_t i = 0; i < n_classes; ++i) slots[i] = static_cast<int>(i);
    Shuffle(slots, rng);
    return slots;
  };
  const char* split_names[3] = {"train", "valid", "test"};

  for (const std::string& noise : noises) {
    const std::string infix = noise.empty() ? "" : noise + "_";
    for (int s = 0; s < 3; ++s) {
      // Every (clip, direction) pair of a class is used exactly once per split.
      std::vector<std::vector<std::pair<std::string, hrtf::Direction>>> pools(n_classes);
      for (std::size_t c = 0; c < n_classes; ++c) {
        for (const auto& clip : parts[c][s]) {
          for (const auto& d : grid) pools[c].emplace_back(clip, d);
        }
        Shuffle(pools[c], rng);
      }
      const std::size_t count = pools[0].size();
      for (std::size_t i = 0; i < count; ++i) {
        MixturePlan m;
        m.split = split_names[s];
        char buf[64];
        std::snprintf(buf, sizeof buf, "mix%03zu", i + 1);
        m.stem = m.split + "_" + infix + buf;
        const auto slots = slot_order();
        for (std::size_t c = 0; c < n_classes; ++c) {
          m.placements.push_back({slots[c], {static_cast<int>(c), pools[c][i].first},
                                  pools[c][i].second});
        }
        finish(m, noise);
      }
    }
    // Direction-specific test sets: every event of a mixture shares one
    // direction, drawn from the test clips.
    auto fixed = [&](const std::string& split, const std::vector<hrtf::Direction>& dirs) {
      for (const auto& d : dirs) {
        for (int k = 0; k < cfg.split[2]; ++k) {
          MixturePlan m;
          m.split = split;
          m.stem = "test-" + DirectionTag(d) + "_" + infix + "mix" + std::to_string(k + 1);
          const auto slots = slot_order();
          for (std::size_t c = 0; c < n_classes; ++c) {
            m.placements.push_back(
                {slots[c], {static_cast<int>(c), parts[c][2][static_cast<std::size_t>(k)]}, d});
          }
          finish(m, noise);
        }
      }
    };
    std::vector<hrtf::Direction> horizontal, median;
    for (int az : cfg.azimuths) horizontal.push_back(hrtf::Direction::Normalized(az, 0));
    for (int el : cfg.elevations) median.push_back(hrtf::Direction::Normalized(0, el));
    fixed("test_h", horizontal);
    fixed("test_v", median);
  }
  for (auto& m : plan) {
    std::sort(m.placements.begin(), m.placements.end(),
              [](const Placement& a, const Placement& b) { return a.slot < b.slot; });
  }
  return plan;
}

SplitCounts CountSplits(const std::vector<MixturePlan>& plan) {
  SplitCounts c;
  for (const char* s : {"train", "valid", "test", "test_h", "test_v"}) c.files[s] = 0;
  for (const auto& m : plan) ++c.files[m.split];
  return c;
}

RenderedMixture BuildMixture(const std::vector<SlotEvent>& events, const Stereo* noise,
                             std::optional<double> snr_db, int fs, int frames_per_slot) {
  if (events.size() != 12) {
    throw InvalidArgument("mixture: expected 12 clips, got " + std::to_string(events.size()));
  }
  if (fs <= 0 || frames_per_slot <= 0) throw InvalidArgument("mixture: bad rate or slot size");
  if (noise && !snr_db) throw InvalidArgument("mixture: noise given without snr_db");
  const std::size_t seg = events[0].audio[0].size();
  if (seg == 0) throw InvalidArgument("mixture: empty clip");
  for (const auto& e : events) {
    if (e.audio[0].size() != seg || e.audio[1].size() != seg) {
      throw InvalidArgument("mixture: clips must share one slot length");
    }
  }
  const std::size_t total = seg * events.size();
  if (noise && ((*noise)[0].size() != total || (*noise)[1].size() != total)) {
    throw InvalidArgument("mixture: noise length must equal the mixture length");
  }
  RenderedMixture r;
  r.audio.fs = fs;
  r.audio.channels.assign(2, std::vector<double>(total, 0.0));
  for (std::size_t slot = 0; slot < events.size(); ++slot) {
    const SlotEvent& e = events[slot];
    const std::size_t base = slot * seg;
    Stereo ev = e.audio;
    double gain = 1.0;
    if (noise) {
      Stereo nseg;
      for (int c = 0; c < 2; ++c) {
        nseg[c].assign((*noise)[c].begin() + static_cast<long>(base),
                       (*noise)[c].begin() + static_cast<long>(base + seg));
      }
      ev = MixAtSnr(ev, nseg, *snr_db, &gain);
    }
    r.event_gains.push_back(gain);
    for (int c = 0; c < 2; ++c) {
      std::copy(ev[c].begin(), ev[c].end(), r.audio.channels[c].begin() + static_cast<long>(base));
    }
    const int az = static_cast<int>(std::lround(e.direction.azimuth_deg));
    const int el = static_cast<int>(std::lround(e.direction.elevation_deg));
    for (int f : ActiveFrames(e.activity, frames_per_slot)) {
      r.labels.push_back({static_cast<int>(slot) * frames_per_slot + f, e.class_index, az, el});
    }
  }
  metrics::SortRows(r.labels);
  return r;
}

void ApplyHeadroom(RenderedMixture& mix, double headroom_db) {
  double peak = 0.0;
  for (const auto& ch : mix.audio.channels) {
    for (double v : ch) peak = std::max(peak, std::fabs(v));
  }
  const double ceiling = std::pow(10.0, -headroom_db / 20.0);
  mix.scale = peak > 0.0 ? std::min(1.0, ceiling / peak) : 1.0;
  if (mix.scale == 1.0) return;
  for (auto& ch : mix.audio.channels) {
    for (double& v : ch) v *= mix.scale;
  }
}

std::map<std::pair<int, int>, hrtf::HrirPair> LoadHrirGrid(const SynthConfig& cfg) {
  if (cfg.hrir_dir.empty()) throw InvalidArgument("synth: hrir_dir is not configured");
  std::map<std::pair<int, int>, hrtf::HrirPair> grid;
  std::vector<std::pair<int, int>> keys;
  for (int az : cfg.azimuths) {
    for (int el : cfg.elevations) keys.emplace_back(az, el);
  }
  std::vector<hrtf::HrirPair> loaded(keys.size());
  ParallelFor(keys.size(), [&](std::size_t i) {
    const auto d = hrtf::Direction::Normalized(keys[i].first, keys[i].second);
    const std::string path = (fs::path(cfg.hrir_dir) / hrtf::FormatHrirFilename(d)).string();
    hrtf::HrirPair p = hrtf::LoadHrirPair(path, cfg.hrir_fs, d, 0);
    p.left = ToRate(p.left, cfg.hrir_fs, cfg.fs);
    p.right = ToRate(p.right, cfg.hrir_fs, cfg.fs);
    p.fs = cfg.fs;
    loaded[i] = std::move(p);
  });
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto d = hrtf::Direction::Normalized(keys[i].first, keys[i].second);
    grid[{static_cast<int>(std::lround(d.azimuth_deg)), static_cast<int>(std::lround(d.elevation_deg))}] =
        std::move(loaded[i]);
  }
  return grid;
}

namespace {

struct Sources {
  std::map<std::string, std::vector<double>> clips;  // mono, one slot long
  std::map<std::string, std::vector<std::pair<double, double>>> activity;
  std::map<std::pair<int, int>, hrtf::HrirPair> hrirs;
};

std::pair<int, int> Key(const hrtf::Direction& d) {
  return {static_cast<int>(std::lround(d.azimuth_deg)),
          static_cast<int>(std::lround(d.elevation_deg))};
}

Stereo LoadNoise(const SynthConfig& cfg, const std::string& path, double offset_fraction) {
  const dsp::Audio a = dsp::ReadWav(path);
  if (a.frames() == 0) throw DomainError("synth: empty noise file " + path);
  Stereo s;
  for (int c = 0; c < 2; ++c) {
    const auto& src = a.channels[std::min<std::size_t>(c, a.channels.size() - 1)];
    s[c] = ToRate(src, a.fs, cfg.fs);
  }
  const std::size_t len = s[0].size();
  const std::size_t need = static_cast<std::size_t>(cfg.mixture_s) * static_cast<std::size_t>(cfg.fs);
  const std::size_t offset =
      len > need ? static_cast<std::size_t>(std::floor(offset_fraction * static_cast<double>(len - need)))
                 : 0;
  Stereo out;
  for (int c = 0; c < 2; ++c) {
    out[c].resize(need);
    for (std::size_t i = 0; i < need; ++i) out[c][i] = s[c][(offset + i) % len];
  }
  return out;
}

RenderedMixture Render(const SynthConfig& cfg, const MixturePlan& m, const Sources& src,
                       const Inventory& inv, const std::string& noise_dir) {
  Stereo noise;
  if (!m.noise.empty()) {
    const std::string path = (fs::path(noise_dir) / inv.noise.at(m.noise)[m.noise_file]).string();
    noise = LoadNoise(cfg, path, m.noise_offset);
  }
  std::vector<SlotEvent> events;
  for (const Placement& p : m.placements) {
    SlotEvent e;
    e.audio = Spatialize(src.clips.at(p.clip.file), src.hrirs.at(Key(p.direction)), cfg.fs);
    e.class_index = p.clip.class_index;
    e.direction = p.direction;
    e.activity = src.activity.at(p.clip.file);
    events.push_back(std::move(e));
  }
  RenderedMixture r = BuildMixture(events, m.noise.empty() ? nullptr : &noise,
                                   m.noise.empty() ? std::nullopt : cfg.snr_db, cfg.fs,
                                   cfg.frames_per_slot());
  ApplyHeadroom(r, cfg.headroom_db);
  return r;
}

}  // namespace

DatasetResult BuildDataset(const SynthConfig& cfg, const std::string& event_dir,
                           const std::string& noise_dir, const std::string& out_dir) {
  cfg.Validate();
  const Inventory inv = ScanInventory(cfg, event_dir, noise_dir);
  const std::vector<MixturePlan> plan = BuildPlan(cfg, inv);

  Sources src;
  src.hrirs = LoadHrirGrid(cfg);
  std::vector<std::string> files;
  for (const auto& per_class : inv.clips) files.insert(files.end(), per_class.begin(), per_class.end());
  std::vector<std::vector<double>> clips(files.size());
  std::vector<std::vector<std::pair<double, double>>> activity(files.size());
  const std::size_t seg = static_cast<std::size_t>(cfg.segment_s) * static_cast<std::size_t>(cfg.fs);
  ParallelFor(files.size(), [&](std::size_t i) {
    const fs::path path = fs::path(event_dir) / files[i];
    const dsp::Audio a = dsp::ReadWav(path.string());
    if (a.frames() == 0) throw DomainError("synth: empty event clip " + path.string());
    std::vector<double> mono = ToRate(Mono(a), a.fs, cfg.fs);
    mono.resize(seg, 0.0);
    clips[i] = std::move(mono);
    const fs::path side = fs::path(event_dir) / (Stem(files[i]) + ".txt");
    if (fs::exists(side)) activity[i] = ReadActivity(side.string());
  });
  for (std::size_t i = 0; i < files.size(); ++i) {
    src.clips[files[i]] = std::move(clips[i]);
    src.activity[files[i]] = std::move(activity[i]);
  }

  for (const char* s : {"train", "valid", "test", "test_h", "test_v"}) {
    fs::create_directories(fs::path(out_dir) / s);
  }
  std::vector<Json> entries(plan.size());
  ParallelFor(plan.size(), [&](std::size_t i) {
    const MixturePlan& m = plan[i];
    const RenderedMixture r = Render(cfg, m, src, inv, noise_dir);
    const fs::path dir = fs::path(out_dir) / m.split;
    dsp::WriteWav16((dir / (m.stem + ".wav")).string(), r.audio);
    metrics::WriteLabels((dir / (m.stem + ".csv")).string(), r.labels);
    Json e;
    e["split"] = m.split;
    e["wav"] = m.split + "/" + m.stem + ".wav";
    e["csv"] = m.split + "/" + m.stem + ".csv";
    if (!m.noise.empty()) {
      e["noise"] = m.noise;
      e["noise_file"] = inv.noise.at(m.noise)[m.noise_file];
      e["noise_offset"] = m.noise_offset;
      e["snr_db"] = *cfg.snr_db;
    }
    e["scale"] = r.scale;
    Json placements = Json::array();
    for (std::size_t k = 0; k < m.placements.size(); ++k) {
      const Placement& p = m.placements[k];
      Json pj;
      pj["slot"] = p.slot;
      pj["class"] = cfg.classes[static_cast<std::size_t>(p.clip.class_index)];
      pj["clip"] = p.clip.file;
      pj["azimuth"] = static_cast<int>(std::lround(p.direction.azimuth_deg));
      pj["elevation"] = static_cast<int>(std::lround(p.direction.elevation_deg));
      if (!m.noise.empty()) pj["gain"] = r.event_gains[k];
      placements.push_back(pj);
    }
    e["placements"] = placements;
    entries[i] = std::move(e);
  });

  DatasetResult result;
  result.counts = CountSplits(plan);
  Json manifest;
  manifest["seed"] = cfg.seed;
  manifest["config"] = Json::parse(cfg.ToJson());
  Json counts;
  for (const auto& [k, v] : result.counts.files) counts[k] = v;
  manifest["counts"] = counts;
  manifest["files"] = entries;
  result.manifest_path = (fs::path(out_dir) / "manifest.json").string();
  std::ofstream os(result.manifest_path);
  if (!os) throw IoError("cannot write " + result.manifest_path);
  os << manifest.dump(2) << '\n';
  return result;
}

}  // namespace biseld::dataset
