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

#include "cues/cues.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "common/error.h"
#include "dsp/fir.h"

namespace biseld::cues {
namespace {

bool AllZero(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

double Energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

}  // namespace

double Itd(const HrirPair& pair, const ItdOptions& opts) {
  pair.Validate();
  if (AllZero(pair.left) || AllZero(pair.right)) {
    throw DomainError("itd: all-zero channel, normalized correlation undefined");
  }
  if (opts.upsample == 0) throw InvalidArgument("itd: upsample factor must be >= 1");
  const double fs = pair.fs;
  const auto lpf = dsp::DesignLowPass(opts.lpf_taps, opts.lpf_cutoff_hz, fs);
  const double fs_up = fs * static_cast<double>(opts.upsample);
  std::size_t image_taps = opts.lpf_taps * opts.upsample;
  if (image_taps % 2 == 0) ++image_taps;
  const auto anti_image = dsp::DesignLowPass(image_taps, opts.lpf_cutoff_hz, fs_up);

  const auto l = dsp::Upsample(dsp::FiltFilt(pair.left, lpf), opts.upsample, anti_image);
  const auto r = dsp::Upsample(dsp::FiltFilt(pair.right, lpf), opts.upsample, anti_image);
  const double norm = std::sqrt(Energy(l) * Energy(r));
  if (!(norm > 0.0)) {
    throw DomainError("itd: channel energy vanished after low-pass filtering");
  }
  const long n = static_cast<long>(l.size());
  const long max_lag = static_cast<long>(std::floor(opts.max_lag_us * 1e-6 * fs_up + 1e-9));
  if (max_lag >= n) {
    throw InvalidArgument("itd: max lag exceeds the upsampled sequence length");
  }
  // c(tau) = sum_t l[t] * r[t - tau]
  auto correlation = [&](long tau) {
    double acc = 0.0;
    const long lo = std::max(0L, tau);
    const long hi = std::min(n, n + tau);
    for (long t = lo; t < hi; ++t) acc += l[t] * r[t - tau];
    return acc / norm;
  };
  // Visit lags in order of increasing |tau| so ties keep the smallest delay.
  long best_lag = 0;
  double best = correlation(0);
  for (long k = 1; k <= max_lag; ++k) {
    for (long tau : {k, -k}) {
      const double c = correlation(tau);
      if (c > best) {
        best = c;
        best_lag = tau;
      }
    }
  }
  return static_cast<double>(best_lag) / fs_up;
}

std::pair<ComplexSpectrum, ComplexSpectrum> PairSpectra(const HrirPair& pair,
                                                        std::size_t pad_to) {
  pair.Validate();
  return {dsp::ForwardFft(pair.left, pad_to, pair.fs),
          dsp::ForwardFft(pair.right, pad_to, pair.fs)};
}

std::vector<double> IldNarrowband(const ComplexSpectrum& left,
                                  const ComplexSpectrum& right) {
  if (left.size() != right.size()) throw InvalidArgument("ild: bin count mismatch");
  std::vector<double> ild(left.size());
  for (std::size_t k = 0; k < left.size(); ++k) {
    const double ml = std::abs(left.bins[k]);
    const double mr = std::abs(right.bins[k]);
    if (ml == 0.0 || mr == 0.0) {
      throw DomainError("ild: zero magnitude at bin " + std::to_string(k));
    }
    // Difference of logs keeps the result exactly antisymmetric under a swap.
    ild[k] = 20.0 * (std::log10(mr) - std::log10(ml));
  }
  return ild;
}

double IldWideband(const ComplexSpectrum& left, const ComplexSpectrum& right,
                   double f_lo, double f_hi) {
  if (left.size() != right.size()) throw InvalidArgument("ild: bin count mismatch");
  if (!(left.fs > 0.0)) throw InvalidArgument("ild: spectrum needs fs");
  if (f_hi > left.fs / 2.0 || f_lo < 0.0 || f_lo >= f_hi) {
    throw InvalidArgument("ild: band must lie within [0, Nyquist]");
  }
  double el = 0.0, er = 0.0;
  for (std::size_t k = 0; k <= left.size() / 2; ++k) {
    const double f = left.bin_hz(k);
    if (f < f_lo || f > f_hi) continue;
    el += std::norm(left.bins[k]);
    er += std::norm(right.bins[k]);
  }
  if (el == 0.0 || er == 0.0) throw DomainError("ild: zero energy in band");
  return 10.0 * (std::log10(er) - std::log10(el));
}

PrtfResult ExtractPrtf(std::span<const double> hrir, double fs, double window_ms,
                       std::size_t n_fft) {
  if (hrir.empty()) throw InvalidArgument("prtf: empty HRIR");
  const auto half =
      static_cast<std::size_t>(std::llround(0.5 * window_ms * 1e-3 * fs));
  const auto window = dsp::HannSymmetric(half);
  const std::size_t peak = hrtf::PeakIndex(hrir);
  PrtfResult result;
  result.truncated = peak < half || peak + half >= hrir.size();
  std::vector<double> clipped(hrir.size(), 0.0);
  for (std::size_t i = 0; i < window.size(); ++i) {
    const long n = static_cast<long>(peak) - static_cast<long>(half) + static_cast<long>(i);
    if (n < 0 || n >= static_cast<long>(hrir.size())) continue;
    clipped[n] = hrir[n] * window[i];
  }
  result.spectrum = dsp::ForwardFft(clipped, std::max(n_fft, hrir.size()), fs);
  return result;
}

std::vector<SpectralFeature> FindExtrema(std::span<const double> freqs_hz,
                                         std::span<const double> level_db,
                                         const FeatureBand& band,
                                         double min_prominence_db,
                                         double elevation_deg) {
  if (freqs_hz.size() != level_db.size()) {
    throw InvalidArgument("spectral features: frequency/level size mismatch");
  }
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < freqs_hz.size(); ++k) {
    if (freqs_hz[k] >= band.lo_hz && freqs_hz[k] <= band.hi_hz) idx.push_back(k);
  }
  std::vector<SpectralFeature> out;
  const std::size_t n = idx.size();
  if (n < 3) return out;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = level_db[idx[i]];

  auto scan = [&](FeatureKind kind, double sign) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = sign * v[i];
    std::size_t i = 1;
    while (i + 1 < n) {
      if (!(y[i] > y[i - 1])) {
        ++i;
        continue;
      }
      std::size_t j = i;  // plateau end
      while (j + 1 < n && y[j + 1] == y[i]) ++j;
      if (j + 1 < n && y[j + 1] < y[i]) {
        const std::size_t mid = (i + j) / 2;
        const double h = y[mid];
        double left_min = h;
        for (long k = static_cast<long>(i) - 1; k >= 0 && y[k] <= h; --k) {
          left_min = std::min(left_min, y[k]);
        }
        double right_min = h;
        for (std::size_t k = j + 1; k < n && y[k] <= h; ++k) {
          right_min = std::min(right_min, y[k]);
        }
        const double prominence = h - std::max(left_min, right_min);
        if (prominence >= min_prominence_db) {
          out.push_back({kind, freqs_hz[idx[mid]], v[mid], elevation_deg});
        }
      }
      i = j + 1;
    }
  };
  scan(FeatureKind::kPeak, 1.0);
  scan(FeatureKind::kNotch, -1.0);
  std::sort(out.begin(), out.end(), [](const SpectralFeature& a, const SpectralFeature& b) {
    return a.frequency_hz < b.frequency_hz;
  });
  return out;
}

std::vector<SpectralFeature> FindSpectralFeatures(const ComplexSpectrum& prtf,
                                                  const FeatureBand& band,
                                                  double min_prominence_db,
                                                  double elevation_deg) {
  if (!(prtf.fs > 0.0)) throw InvalidArgument("spectral features: spectrum needs fs");
  if (band.hi_hz > prtf.fs / 2.0 || band.lo_hz < 0.0 || band.lo_hz >= band.hi_hz) {
    throw InvalidArgument("spectral features: band must lie within [0, Nyquist]");
  }
  const std::size_t half = prtf.size() / 2 + 1;
  std::vector<double> freqs(half), db(half);
  constexpr double kFloor = 1e-12;
  for (std::size_t k = 0; k < half; ++k) {
    freqs[k] = prtf.bin_hz(k);
    db[k] = 20.0 * std::log10(std::max(std::abs(prtf.bins[k]), kFloor));
  }
  return FindExtrema(freqs, db, band, min_prominence_db, elevation_deg);
}

BeamPattern Hpd(const std::map<double, ComplexSpectrum>& horizontal_hrtfs,
                double frequency_hz) {
  auto front = horizontal_hrtfs.find(0.0);
  if (front == horizontal_hrtfs.end()) {
    throw InvalidArgument("hpd: horizontal set has no azimuth-0 HRTF");
  }
  const ComplexSpectrum& ref = front->second;
  if (!(ref.fs > 0.0) || ref.size() == 0) throw InvalidArgument("hpd: spectrum needs fs");
  const auto k = static_cast<std::size_t>(
      std::llround(frequency_hz * static_cast<double>(ref.size()) / ref.fs));
  if (k >= ref.size()) throw InvalidArgument("hpd: frequency beyond spectrum");
  const double ref_mag = std::abs(ref.bins[k]);
  if (ref_mag == 0.0) throw DomainError("hpd: frontal HRTF is zero at the target bin");
  BeamPattern bp;
  bp.frequency_hz = frequency_hz;
  const double ref_log = std::log10(ref_mag);
  for (const auto& [az, spec] : horizontal_hrtfs) {
    if (spec.size() != ref.size()) throw InvalidArgument("hpd: bin count mismatch");
    const double mag = std::abs(spec.bins[k]);
    bp.levels[az] = mag == 0.0 ? -std::numeric_limits<double>::infinity()
                               : 20.0 * (std::log10(mag) - ref_log);
  }
  return bp;
}

}  // namespace biseld::cues
