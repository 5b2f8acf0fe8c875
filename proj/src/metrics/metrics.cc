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

#include "metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <set>

#include "common/error.h"
#include "json.hpp"

namespace biseld::metrics {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr double kDeg = std::numbers::pi / 180.0;

Vec3 Normalize(const Vec3& v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(n > 0.0)) throw DomainError("angular error: zero-length direction vector");
  return {v[0] / n, v[1] / n, v[2] / n};
}

bool Selected(const EvalOptions& opts, int c) {
  return !opts.only_class || *opts.only_class == c;
}

// Events grouped by frame, then by class.
using FrameMap = std::map<int, std::map<int, std::vector<Vec3>>>;

FrameMap Group(const std::vector<Event>& events, const EvalOptions& opts, int divisor) {
  FrameMap m;
  for (const Event& e : events) {
    if (e.class_index < 0 || e.class_index >= opts.num_classes) {
      throw InvalidArgument("metrics: class index out of range");
    }
    if (e.frame < 0) throw InvalidArgument("metrics: negative frame index");
    if (!Selected(opts, e.class_index)) continue;
    m[e.frame / divisor][e.class_index].push_back(Normalize(e.direction));
  }
  return m;
}

const std::vector<Vec3>& Lookup(const FrameMap& m, int key, int c) {
  static const std::vector<Vec3> kEmpty;
  const auto it = m.find(key);
  if (it == m.end()) return kEmpty;
  const auto jt = it->second.find(c);
  return jt == it->second.end() ? kEmpty : jt->second;
}

std::set<int> Keys(const FrameMap& a, const FrameMap& b) {
  std::set<int> keys;
  for (const auto& [k, _] : a) keys.insert(k);
  for (const auto& [k, _] : b) keys.insert(k);
  return keys;
}

}  // namespace

Vec3 DirectionVector(double azimuth_deg, double elevation_deg) {
  const double az = azimuth_deg * kDeg, el = elevation_deg * kDeg;
  return {std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el)};
}

double AngularError(const Vec3& u_in, const Vec3& v_in) {
  const Vec3 u = Normalize(u_in), v = Normalize(v_in);
  const double dx = u[0] - v[0], dy = u[1] - v[1], dz = u[2] - v[2];
  const double half_chord = 0.5 * std::sqrt(dx * dx + dy * dy + dz * dz);
  if (half_chord >= 1.0) return 180.0;
  return 2.0 * std::asin(half_chord) / kDeg;
}

std::vector<Event> EventsFromRows(const std::vector<LabelRow>& rows) {
  std::vector<Event> out;
  out.reserve(rows.size());
  for (const LabelRow& r : rows) {
    out.push_back({r.frame, r.class_index, DirectionVector(r.azimuth_deg, r.elevation_deg)});
  }
  return out;
}

std::vector<SegmentCounts> CountSegments(const std::vector<Event>& ref,
                                         const std::vector<Event>& pred,
                                         const EvalOptions& opts) {
  if (opts.frames_per_segment <= 0) throw InvalidArgument("metrics: frames per segment must be positive");
  const FrameMap r = Group(ref, opts, opts.frames_per_segment);
  const FrameMap p = Group(pred, opts, opts.frames_per_segment);
  int segments = 0;
  for (const FrameMap* m : {&r, &p}) {
    if (!m->empty()) segments = std::max(segments, m->rbegin()->first + 1);
  }
  std::vector<SegmentCounts> out(static_cast<std::size_t>(segments));
  for (int s = 0; s < segments; ++s) {
    SegmentCounts& sc = out[static_cast<std::size_t>(s)];
    for (int c = 0; c < opts.num_classes; ++c) {
      if (!Selected(opts, c)) continue;
      const auto& rs = Lookup(r, s, c);
      const auto& ps = Lookup(p, s, c);
      if (!rs.empty()) ++sc.n;
      if (!rs.empty() && !ps.empty()) {
        double best = 180.0;
        for (const Vec3& a : rs) {
          for (const Vec3& b : ps) best = std::min(best, AngularError(a, b));
        }
        if (best < opts.angle_threshold_deg) {
          ++sc.tp;
        } else {
          ++sc.fp;
          ++sc.fn;
        }
      } else if (!rs.empty()) {
        ++sc.fn;
      } else if (!ps.empty()) {
        ++sc.fp;
      }
    }
  }
  return out;
}

void Tally::Accumulate(const std::vector<Event>& ref, const std::vector<Event>& pred,
                       const EvalOptions& opts) {
  for (const SegmentCounts& sc : CountSegments(ref, pred, opts)) {
    tp += sc.tp;
    fp += sc.fp;
    fn += sc.fn;
    n += sc.n;
    sdi += sc.substitutions() + sc.deletions() + sc.insertions();
  }
  const FrameMap r = Group(ref, opts, 1);
  const FrameMap p = Group(pred, opts, 1);
  for (int frame : Keys(r, p)) {
    for (int c = 0; c < opts.num_classes; ++c) {
      if (!Selected(opts, c)) continue;
      const auto& rs = Lookup(r, frame, c);
      const auto& ps = Lookup(p, frame, c);
      if (!rs.empty()) {
        if (ps.size() == rs.size()) {
          ++lr_tp;
        } else {
          ++lr_fn;
        }
      }
      // Greedy matching by smallest angular error.
      std::vector<bool> used_r(rs.size(), false), used_p(ps.size(), false);
      for (std::size_t k = 0; k < std::min(rs.size(), ps.size()); ++k) {
        double best = INFINITY;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < rs.size(); ++i) {
          if (used_r[i]) continue;
          for (std::size_t j = 0; j < ps.size(); ++j) {
            if (used_p[j]) continue;
            const double e = AngularError(rs[i], ps[j]);
            if (e < best) {
              best = e;
              bi = i;
              bj = j;
            }
          }
        }
        used_r[bi] = used_p[bj] = true;
        le_sum += best;
        ++le_pairs;
      }
    }
  }
}

Tally& Tally::operator+=(const Tally& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  n += o.n;
  sdi += o.sdi;
  le_sum += o.le_sum;
  le_pairs += o.le_pairs;
  lr_tp += o.lr_tp;
  lr_fn += o.lr_fn;
  return *this;
}

Composite CompositeErrors(double er, double f, double le_deg, double lr) {
  Composite c;
  c.sed = (er + (1.0 - f)) / 2.0;
  c.doa = (le_deg / 180.0 + (1.0 - lr)) / 2.0;
  c.seld = (c.sed + c.doa) / 2.0;
  return c;
}

MetricReport Finalize(const Tally& t) {
  MetricReport r;
  r.tally = t;
  if (t.n > 0) r.er = static_cast<double>(t.sdi) / static_cast<double>(t.n);
  const long f_den = 2 * t.tp + t.fp + t.fn;
  if (f_den > 0) r.f = 2.0 * static_cast<double>(t.tp) / static_cast<double>(f_den);
  if (t.le_pairs > 0) {
    r.le_deg = t.le_sum / static_cast<double>(t.le_pairs);
    r.le_defaulted = false;
  }
  if (t.lr_tp + t.lr_fn > 0) {
    r.lr = static_cast<double>(t.lr_tp) / static_cast<double>(t.lr_tp + t.lr_fn);
  }
  if (r.er && r.f && r.lr) r.composite = CompositeErrors(*r.er, *r.f, r.le_deg, *r.lr);
  return r;
}

MetricReport Evaluate(const std::vector<Event>& ref, const std::vector<Event>& pred,
                      const EvalOptions& opts) {
  Tally t;
  t.Accumulate(ref, pred, opts);
  return Finalize(t);
}

DirectoryReport EvaluateDirectories(const std::string& ref_dir, const std::string& pred_dir,
                                    const EvalOptions& opts) {
  if (!fs::is_directory(ref_dir)) throw IoError("not a directory: " + ref_dir);
  if (!fs::is_directory(pred_dir)) throw IoError("not a directory: " + pred_dir);
  std::vector<fs::path> refs;
  for (const auto& e : fs::directory_iterator(ref_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") refs.push_back(e.path());
  }
  std::sort(refs.begin(), refs.end());
  if (refs.empty()) throw InvalidArgument("evaluate: no CSV files in " + ref_dir);

  DirectoryReport out;
  Tally overall;
  std::vector<Tally> per_class(static_cast<std::size_t>(opts.num_classes));
  for (const fs::path& ref_path : refs) {
    const std::string base = ref_path.filename().string();
    const fs::path pred_path = fs::path(pred_dir) / base;
    const auto ref = EventsFromRows(ReadLabels(ref_path.string()));
    std::vector<Event> pred;
    if (fs::exists(pred_path)) {
      pred = EventsFromRows(ReadLabels(pred_path.string()));
    } else {
      out.missing_predictions.push_back(base);
    }
    out.files.push_back(base);
    overall.Accumulate(ref, pred, opts);
    for (int c = 0; c < opts.num_classes; ++c) {
      EvalOptions oc = opts;
      oc.only_class = c;
      per_class[static_cast<std::size_t>(c)].Accumulate(ref, pred, oc);
    }
  }
  out.overall = Finalize(overall);
  for (const Tally& t : per_class) out.per_class.push_back(Finalize(t));
  return out;
}

namespace {

Json ReportToJson(const MetricReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  Json j;
  j["er20"] = opt(r.er);
  j["f20"] = opt(r.f);
  j["le_cd_deg"] = r.le_deg;
  j["le_cd_defaulted"] = r.le_defaulted;
  j["lr_cd"] = opt(r.lr);
  if (r.composite) {
    j["sed_error"] = r.composite->sed;
    j["doa_error"] = r.composite->doa;
    j["seld_error"] = r.composite->seld;
  } else {
    j["sed_error"] = nullptr;
    j["doa_error"] = nullptr;
    j["seld_error"] = nullptr;
  }
  j["counts"] = {{"tp", r.tally.tp},         {"fp", r.tally.fp},
                 {"fn", r.tally.fn},         {"n", r.tally.n},
                 {"matched_pairs", r.tally.le_pairs}};
  return j;
}

}  // namespace

std::string ReportJson(const DirectoryReport& r, const std::vector<std::string>& class_names) {
  Json j = ReportToJson(r.overall);
  Json classes = Json::object();
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const std::string name = c < class_names.size() ? class_names[c] : std::to_string(c);
    classes[name] = ReportToJson(r.per_class[c]);
  }
  j["per_class"] = classes;
  j["files"] = r.files;
  j["missing_predictions"] = r.missing_predictions;
  return j.dump(2);
}

}  // namespace biseld::metrics
