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

#ifndef BISELD_CUES_CUES_H_
#define BISELD_CUES_CUES_H_

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hrtf/hrtf.h"

namespace biseld::cues {

using dsp::ComplexSpectrum;
using hrtf::HrirPair;

struct ItdOptions {
  double max_lag_us = 1000.0;
  double lpf_cutoff_hz = 1500.0;
  std::size_t upsample = 4;
  std::size_t lpf_taps = 101;
};

// Interaural time difference by normalized cross-correlation of the low-passed,
// upsampled pair. Positive means the left ear lags the right.
double Itd(const HrirPair& pair, const ItdOptions& opts = {});

// 20*log10(|H_R| / |H_L|) per bin.
std::vector<double> IldNarrowband(const ComplexSpectrum& left,
                                  const ComplexSpectrum& right);

// Spectra of a pair zero-padded to `pad_to` (4800 gives 10 Hz bins at 48 kHz).
std::pair<ComplexSpectrum, ComplexSpectrum> PairSpectra(const HrirPair& pair,
                                                        std::size_t pad_to);

// 10*log10 of the right/left energy ratio over bins in [f_lo, f_hi].
double IldWideband(const ComplexSpectrum& left, const ComplexSpectrum& right,
                   double f_lo = 20.0, double f_hi = 20000.0);

struct PrtfResult {
  ComplexSpectrum spectrum;
  bool truncated = false;  // window ran past either end of the HRIR
};

// Hann window of `window_ms` centred on the peak sample, zero elsewhere,
// then FFT at the HRIR length (or `n_fft` when larger).
PrtfResult ExtractPrtf(std::span<const double> hrir, double fs,
                       double window_ms = 2.0, std::size_t n_fft = 0);

enum class FeatureKind { kPeak, kNotch };

struct SpectralFeature {
  FeatureKind kind;
  double frequency_hz;
  double level_db;
  double elevation_deg;
};

struct FeatureBand {
  double lo_hz = 5000.0;
  double hi_hz = 16000.0;
};

// Local maxima (peaks) and minima (notches) of the dB magnitude within the
// band, kept when their topographic prominence reaches min_prominence_db.
// Sorted by frequency.
std::vector<SpectralFeature> FindSpectralFeatures(const ComplexSpectrum& prtf,
                                                  const FeatureBand& band = {},
                                                  double min_prominence_db = 3.0,
                                                  double elevation_deg = 0.0);

// Same search on an already-computed dB curve sampled at `freqs_hz`.
std::vector<SpectralFeature> FindExtrema(std::span<const double> freqs_hz,
                                         std::span<const double> level_db,
                                         const FeatureBand& band,
                                         double min_prominence_db,
                                         double elevation_deg = 0.0);

struct BeamPattern {
  double frequency_hz = 0.0;
  std::map<double, double> levels;  // azimuth_deg -> dB
};

// Horizontal-plane directivity: every HRTF normalized by the frontal one at
// the bin nearest `frequency_hz`.
BeamPattern Hpd(const std::map<double, ComplexSpectrum>& horizontal_hrtfs,
                double frequency_hz);

}  // namespace biseld::cues

#endif  // BISELD_CUES_CUES_H_
