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

#ifndef BISELD_BTFF_BTFF_H_
#define BISELD_BTFF_BTFF_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "btff/mel.h"
#include "dsp/fft.h"

namespace biseld::btff {

using dsp::Complex;

struct StftParams {
  double fs = 32000.0;
  std::size_t win_length = 1024;
  std::size_t hop = 640;
  std::size_t n_fft = 1024;

  // hop <= win_length <= n_fft, fs > 0.
  void Validate() const;
  std::size_t n_bins() const { return n_fft / 2 + 1; }
};

// Row-major frames x bins matrix.
template <typename T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  T& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
};

using Stft = Matrix<Complex>;
using RealMap = Matrix<double>;

// Number of frames for a signal of `length` samples.
std::size_t FrameCount(std::size_t length, const StftParams& p);

// Periodic-Hann STFT scaled by 1/n_fft. A signal shorter than one window
// yields a single zero-padded frame.
Stft ComputeStft(std::span<const double> x, const StftParams& p);

constexpr double kAmplitudeFloor = 1e-8;

// 20 log10(max(|P|, 1e-8)).
RealMap DbMagnitude(const Stft& p);

// Forward / central / backward frame differences. Needs at least two frames.
RealMap VMap(const RealMap& s);

// Interaural phase delay in seconds for bins [0, bins): atan2 of the
// cross-spectrum divided by the bin's angular frequency. DC is 0.
RealMap ItdPerBin(const Stft& left, const Stft& right, std::size_t bins,
                  double fs);

// Restricts columns to [first, first + count) of a map.
RealMap Columns(const RealMap& m, std::size_t first, std::size_t count);

// S_R - S_L.
RealMap DbDifference(const RealMap& s_left, const RealMap& s_right);

RealMap MelMap(const RealMap& values, const MelBank& bank);

enum Channel : std::size_t {
  kMsLeft = 0,
  kMsRight,
  kVLeft,
  kVRight,
  kItd,
  kIld,
  kScLeft,
  kScRight,
  kNumChannels
};

constexpr std::size_t kMelBins = 64;

const std::array<const char*, kNumChannels>& ChannelNames();

struct Btff {
  std::size_t frames = 0;
  double frame_hop_s = 0.0;
  std::vector<double> data;  // frames x kMelBins x kNumChannels

  double& at(std::size_t t, std::size_t bin, std::size_t ch) {
    return data[(t * kMelBins + bin) * kNumChannels + ch];
  }
  double at(std::size_t t, std::size_t bin, std::size_t ch) const {
    return data[(t * kMelBins + bin) * kNumChannels + ch];
  }
  // frames x kMelBins slice of one channel.
  RealMap Channel(std::size_t ch) const;
};

struct BtffBands {
  double itd_hi_hz = 1500.0;
  double ild_sc_lo_hz = 5000.0;
};

// The four mel banks used by the extractor for a given STFT geometry.
struct BtffBanks {
  MelBank full;    // MS and V maps, [0, fs/2]
  MelBank itd;     // [0, itd_hi]
  MelBank ild_sc;  // [ild_sc_lo, fs/2]

  BtffBanks(const StftParams& p, const BtffBands& bands = {});
};

Btff ExtractBtff(std::span<const double> left, std::span<const double> right,
                 const StftParams& p = {}, const BtffBands& bands = {});

// Zero mean and unit variance per channel (constant channels are only
// centered).
void Standardize(Btff& b);

// Little-endian: "BTFF", u32 T, u32 64, u32 8, f32 hop seconds, then
// float32 values in (frame, bin, channel) order.
void SaveBtff(const std::string& path, const Btff& b);
Btff LoadBtff(const std::string& path);
// Writes <prefix>_<channel>.csv, one per channel, T rows of 64 values.
std::vector<std::string> SaveBtffCsv(const std::string& prefix, const Btff& b);

}  // namespace biseld::btff

#endif  // BISELD_BTFF_BTFF_H_
