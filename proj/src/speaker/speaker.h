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

#ifndef BISELD_SPEAKER_SPEAKER_H_
#define BISELD_SPEAKER_SPEAKER_H_

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace biseld::speaker {

// Thiele-Small parameters of a driver. Units follow the datasheet
// convention: liters, grams, percent.
struct TspSet {
  double r_evc = 6.291;      // ohm
  double f0 = 101.221;       // Hz
  double s_d = 0.002827;     // m^2
  double k_rm = 0.010251;    // ohm
  double e_rm = 0.503;
  double k_xm = 0.040639;    // H
  double e_xm = 0.392;
  double v_as = 1.255;       // liters
  double c_ms = 0.001106;    // m/N
  double m_md = 2.150;       // g
  double m_ms = 2.236;       // g
  double bl = 3.265;         // T m
  double q_ms = 4.531;
  double q_es = 0.839;
  double q_ts = 0.708;
  double n0 = 0.150;         // percent
  double spl0 = 83.778;      // dB

  // Positive quantities and Q_ts within 5% of Q_ms Q_es / (Q_ms + Q_es).
  void Validate() const;
  // Mechanical suspension resistance 2 pi F0 M_ms / Q_ms, kg/s.
  double r_ms() const;

  // Missing keys keep their defaults; unknown keys are rejected.
  static TspSet FromJson(const std::string& json_text);
  std::string ToJson() const;
};

struct Air {
  double rho = 1.204;  // kg/m^3
  double c = 343.0;    // m/s
};

// Lumped elements of the sealed-box acoustic circuit (acoustic ohms,
// compliances in m^5/N, masses in kg/m^4).
struct CircuitElements {
  double current = 0.0;   // A
  double p_ag = 0.0;      // Pa
  double r_avc = 0.0;
  double r_as = 0.0;
  double c_as = 0.0;
  double c_ab = 0.0;      // +inf for an infinite box
  double m_ad = 0.0;
  double radius = 0.0;    // piston radius, m
};

CircuitElements ComputeCircuit(const TspSet& tsp, double v_eg, double v_box_cc,
                               const Air& air = {});

struct Radiation {
  double m_ar = 0.0;
  double r_ar = 0.0;
};

// Front-side piston radiation load at angular frequency omega.
Radiation RadiationImpedance(double omega, double s_d, const Air& air = {});

struct ResponsePoint {
  double freq_hz = 0.0;
  std::complex<double> volume_velocity;  // m^3/s
  std::complex<double> excursion;        // m
  double pressure = 0.0;                 // Pa on axis
  double spl_db = 0.0;                   // dB re 20 uPa
};

std::vector<ResponsePoint> Response(const TspSet& tsp, double v_eg,
                                    double v_box_cc, double r_m,
                                    std::span<const double> freqs_hz,
                                    const Air& air = {});

// n log-spaced frequencies from lo to hi inclusive.
std::vector<double> LogGrid(std::size_t n = 200, double lo_hz = 20.0,
                            double hi_hz = 20000.0);

// Lowest frequency at which the SPL first rises to (reference - drop_db),
// interpolated linearly in log frequency. The reference is the SPL at
// ref_freq_hz when given, otherwise the response maximum.
double FindRolloff(std::span<const double> freqs_hz, std::span<const double> spl_db,
                   std::optional<double> ref_freq_hz = std::nullopt,
                   double drop_db = 6.0);
double FindRolloff(const std::vector<ResponsePoint>& table,
                   std::optional<double> ref_freq_hz = std::nullopt,
                   double drop_db = 6.0);

struct Extremum {
  double freq_hz = 0.0;
  double value = 0.0;
};

// Maximum of a sampled curve, refined by a parabola through the three
// samples around it (in log frequency).
Extremum PeakOf(std::span<const double> freqs_hz, std::span<const double> values);

struct SpeakerSummary {
  double rolloff_hz = 0.0;
  std::optional<double> rolloff_ref_hz;  // empty: referenced to the peak
  Extremum excursion_peak;               // m
  Extremum volume_velocity_peak;         // m^3/s
  Extremum spl_peak;                     // dB
};

SpeakerSummary Summarize(const std::vector<ResponsePoint>& table,
                         std::optional<double> ref_freq_hz = std::nullopt,
                         double drop_db = 6.0);

}  // namespace biseld::speaker

#endif  // BISELD_SPEAKER_SPEAKER_H_
