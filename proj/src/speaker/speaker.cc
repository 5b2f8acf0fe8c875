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

#include "speaker/speaker.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/error.h"
#include "json.hpp"
#include "speaker/struve.h"

namespace biseld::speaker {
namespace {

using Json = nlohmann::ordered_json;
using std::numbers::pi;

struct Field {
  const char* key;
  double TspSet::*member;
};

constexpr Field kFields[] = {
    {"R_evc", &TspSet::r_evc}, {"F0", &TspSet::f0},     {"S_d", &TspSet::s_d},
    {"K_rm", &TspSet::k_rm},   {"E_rm", &TspSet::e_rm}, {"K_xm", &TspSet::k_xm},
    {"E_xm", &TspSet::e_xm},   {"V_as", &TspSet::v_as}, {"C_ms", &TspSet::c_ms},
    {"M_md", &TspSet::m_md},   {"M_ms", &TspSet::m_ms}, {"BL", &TspSet::bl},
    {"Q_ms", &TspSet::q_ms},   {"Q_es", &TspSet::q_es}, {"Q_ts", &TspSet::q_ts},
    {"N0", &TspSet::n0},       {"SPL0", &TspSet::spl0},
};

double InterpLogF(std::span<const double> f, std::span<const double> y, double at) {
  if (at < f.front() || at > f.back()) {
    throw DomainError("rolloff: reference frequency outside the simulated range");
  }
  const auto it = std::lower_bound(f.begin(), f.end(), at);
  const std::size_t i = static_cast<std::size_t>(it - f.begin());
  if (f[i] == at || i == 0) return y[i];
  const double a = (std::log(at) - std::log(f[i - 1])) / (std::log(f[i]) - std::log(f[i - 1]));
  return y[i - 1] + a * (y[i] - y[i - 1]);
}

}  // namespace

void TspSet::Validate() const {
  for (const auto& field : kFields) {
    const double v = this->*field.member;
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw InvalidArgument(std::string("TSP ") + field.key + " must be positive");
    }
  }
  const double q = q_ms * q_es / (q_ms + q_es);
  if (std::fabs(q_ts - q) > 0.05 * q) {
    throw InvalidArgument("TSP Q_ts inconsistent with Q_ms and Q_es");
  }
}

double TspSet::r_ms() const { return 2.0 * pi * f0 * (m_ms * 1e-3) / q_ms; }

TspSet TspSet::FromJson(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("TSP json: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::kParse, "TSP json: expected an object");
  TspSet t;
  for (const auto& [key, value] : j.items()) {
    const auto* f = std::find_if(std::begin(kFields), std::end(kFields),
                                 [&](const Field& x) { return key == x.key; });
    if (f == std::end(kFields)) throw InvalidArgument("TSP json: unknown key " + key);
    if (!value.is_number()) throw InvalidArgument("TSP json: " + key + " is not a number");
    t.*(f->member) = value.get<double>();
  }
  t.Validate();
  return t;
}

std::string TspSet::ToJson() const {
  Json j;
  for (const auto& field : kFields) j[field.key] = this->*field.member;
  return j.dump(2);
}

CircuitElements ComputeCircuit(const TspSet& tsp, double v_eg, double v_box_cc,
                               const Air& air) {
  tsp.Validate();
  if (!(v_eg > 0.0)) throw InvalidArgument("speaker: V_eg must be positive");
  if (!(v_box_cc > 0.0)) throw InvalidArgument("speaker: V_box must be positive");
  if (!(air.rho > 0.0) || !(air.c > 0.0)) throw InvalidArgument("speaker: bad air constants");
  const double sd2 = tsp.s_d * tsp.s_d;
  CircuitElements e;
  e.current = v_eg / tsp.r_evc;
  e.p_ag = tsp.bl * e.current / tsp.s_d;
  e.r_avc = (tsp.bl / tsp.s_d) * (tsp.bl / tsp.s_d) / tsp.r_evc;
  e.r_as = tsp.r_ms() / sd2;
  e.c_as = tsp.c_ms * sd2;
  e.m_ad = tsp.m_md * 1e-3 / sd2;
  if (std::isinf(v_box_cc)) {
    e.c_ab = INFINITY;
  } else {
    const double k_box = air.rho * air.c * air.c * sd2 / (v_box_cc * 1e-6);
    e.c_ab = sd2 / k_box;
  }
  e.radius = std::sqrt(tsp.s_d / pi);
  return e;
}

Radiation RadiationImpedance(double omega, double s_d, const Air& air) {
  if (!(omega > 0.0)) throw InvalidArgument("radiation: omega must be positive");
  const double a = std::sqrt(s_d / pi);
  const double ka = omega / air.c * a;
  const double z0 = air.rho * air.c / s_d;
  Radiation r;
  r.r_ar = z0 * (1.0 - BesselJ1(2.0 * ka) / ka);
  r.m_ar = z0 * StruveH1(2.0 * ka) / ka / omega;
  return r;
}

std::vector<ResponsePoint> Response(const TspSet& tsp, double v_eg, double v_box_cc,
                                    double r_m, std::span<const double> freqs_hz,
                                    const Air& air) {
  if (!(r_m > 0.0)) throw InvalidArgument("speaker: distance must be positive");
  const CircuitElements e = ComputeCircuit(tsp, v_eg, v_box_cc, air);
  using C = std::complex<double>;
  const C j(0.0, 1.0);
  const double path = std::sqrt(r_m * r_m + tsp.s_d / pi) - r_m;
  std::vector<ResponsePoint> out;
  out.reserve(freqs_hz.size());
  for (double f : freqs_hz) {
    if (!(f > 0.0)) throw InvalidArgument("speaker: frequencies must be positive");
    const double w = 2.0 * pi * f;
    const Radiation rad = RadiationImpedance(w, tsp.s_d, air);
    C z = C(e.r_avc + e.r_as + rad.r_ar, w * (e.m_ad + rad.m_ar)) + 1.0 / (j * w * e.c_as);
    if (std::isfinite(e.c_ab)) z += 1.0 / (j * w * e.c_ab);
    ResponsePoint p;
    p.freq_hz = f;
    p.volume_velocity = e.p_ag / z;
    p.excursion = p.volume_velocity / (j * w * tsp.s_d);
    p.pressure = std::abs(p.volume_velocity) * 2.0 * air.rho * air.c / tsp.s_d *
                 std::fabs(std::sin(w / (2.0 * air.c) * path));
    p.spl_db = 20.0 * std::log10(p.pressure / 20e-6);
    out.push_back(p);
  }
  return out;
}

std::vector<double> LogGrid(std::size_t n, double lo_hz, double hi_hz) {
  if (n < 2 || !(lo_hz > 0.0) || !(hi_hz > lo_hz)) {
    throw InvalidArgument("log grid: need n >= 2 and 0 < lo < hi");
  }
  std::vector<double> f(n);
  const double a = std::log(lo_hz), b = std::log(hi_hz);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  f.front() = lo_hz;
  f.back() = hi_hz;
  return f;
}

Extremum PeakOf(std::span<const double> f, std::span<const double> y) {
  if (f.size() != y.size() || f.empty()) throw InvalidArgument("peak: bad curve");
  const std::size_t i = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  if (i == 0 || i + 1 == y.size()) return {f[i], y[i]};
  const double x0 = std::log(f[i - 1]), x1 = std::log(f[i]), x2 = std::log(f[i + 1]);
  const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
  // Vertex of the parabola through the three points.
  const double d0 = (y1 - y0) / (x1 - x0);
  const double d1 = (y2 - y1) / (x2 - x1);
  const double a = (d1 - d0) / (x2 - x0);
  if (!(a < 0.0)) return {f[i], y[i]};
  const double xv = 0.5 * (x0 + x1) - d0 / (2.0 * a);
  const double yv = y1 + d0 * (xv - x1) + a * (xv - x0) * (xv - x1);
  return {std::exp(xv), yv};
}

double FindRolloff(std::span<const double> f, std::span<const double> spl,
                   std::optional<double> ref_freq_hz, double drop_db) {
  if (f.size() != spl.size() || f.size() < 2) throw InvalidArgument("rolloff: bad table");
  const double ref = ref_freq_hz ? InterpLogF(f, spl, *ref_freq_hz) : PeakOf(f, spl).value;
  const double target = ref - drop_db;
  if (spl[0] >= target) {
    throw DomainError("rolloff: no crossing, response already at target at the lowest frequency");
  }
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (spl[i] >= target) {
      const double a = (target - spl[i - 1]) / (spl[i] - spl[i - 1]);
      return std::exp(std::log(f[i - 1]) + a * (std::log(f[i]) - std::log(f[i - 1])));
    }
  }
  throw DomainError("rolloff: no crossing in the simulated range");
}

double FindRolloff(const std::vector<ResponsePoint>& table,
                   std::optional<double> ref_freq_hz, double drop_db) {
  std::vector<double> f, spl;
  for (const auto& p : table) {
    f.push_back(p.freq_hz);
    spl.push_back(p.spl_db);
  }
  return FindRolloff(f, spl, ref_freq_hz, drop_db);
}

SpeakerSummary Summarize(const std::vector<ResponsePoint>& table,
                         std::optional<double> ref_freq_hz, double drop_db) {
  std::vector<double> f, x, u, spl;
  for (const auto& p : table) {
    f.push_back(p.freq_hz);
    x.push_back(std::abs(p.excursion));
    u.push_back(std::abs(p.volume_velocity));
    spl.push_back(p.spl_db);
  }
  SpeakerSummary s;
  s.rolloff_hz = FindRolloff(f, spl, ref_freq_hz, drop_db);
  s.rolloff_ref_hz = ref_freq_hz;
  s.excursion_peak = PeakOf(f, x);
  s.volume_velocity_peak = PeakOf(f, u);
  s.spl_peak = PeakOf(f, spl);
  return s;
}

}  // namespace biseld::speaker
