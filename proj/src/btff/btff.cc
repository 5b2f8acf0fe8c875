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

#include "btff/btff.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "common/binio.h"
#include "common/error.h"
#include "dsp/fir.h"

namespace biseld::btff {

void StftParams::Validate() const {
  if (!(fs > 0.0)) throw InvalidArgument("stft: fs must be positive");
  if (hop == 0 || hop > win_length || win_length > n_fft) {
    throw InvalidArgument("stft: need 0 < hop <= win_length <= n_fft");
  }
}

std::size_t FrameCount(std::size_t length, const StftParams& p) {
  if (length < p.win_length) return 1;
  return (length - p.win_length) / p.hop + 1;
}

Stft ComputeStft(std::span<const double> x, const StftParams& p) {
  p.Validate();
  if (x.empty()) throw InvalidArgument("stft: empty signal");
  const auto window = dsp::HannPeriodic(p.win_length);
  const std::size_t frames = FrameCount(x.size(), p);
  const std::size_t bins = p.n_bins();
  Stft out{frames, bins, std::vector<Complex>(frames * bins)};
  std::vector<double> frame(p.n_fft);
  std::vector<Complex> spec(bins);
  const double scale = 1.0 / static_cast<double>(p.n_fft);
  for (std::size_t m = 0; m < frames; ++m) {
    std::fill(frame.begin(), frame.end(), 0.0);
    const std::size_t start = m * p.hop;
    for (std::size_t n = 0; n < p.win_length && start + n < x.size(); ++n) {
      frame[n] = x[start + n] * window[n];
    }
    dsp::RealFftHalf(frame, spec);
    for (std::size_t k = 0; k < bins; ++k) out(m, k) = spec[k] * scale;
  }
  return out;
}

RealMap DbMagnitude(const Stft& p) {
  RealMap s{p.rows, p.cols, std::vector<double>(p.data.size())};
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    s.data[i] = 20.0 * std::log10(std::max(std::abs(p.data[i]), kAmplitudeFloor));
  }
  return s;
}

RealMap VMap(const RealMap& s) {
  const std::size_t t = s.rows;
  if (t < 2) throw InvalidArgument("v-map: need at least two frames");
  RealMap v{t, s.cols, std::vector<double>(s.data.size())};
  for (std::size_t k = 0; k < s.cols; ++k) {
    v(0, k) = s(1, k) - s(0, k);
    for (std::size_t m = 1; m + 1 < t; ++m) v(m, k) = 0.5 * (s(m + 1, k) - s(m - 1, k));
    v(t - 1, k) = s(t - 1, k) - s(t - 2, k);
  }
  return v;
}

RealMap ItdPerBin(const Stft& left, const Stft& right, std::size_t bins, double fs) {
  if (left.rows != right.rows || left.cols != right.cols) {
    throw ShapeError("itd-map: left/right STFT shapes differ");
  }
  if (bins > left.cols) throw ShapeError("itd-map: band exceeds STFT bins");
  const std::size_t n_fft = 2 * (left.cols - 1);
  RealMap out{left.rows, bins, std::vector<double>(left.rows * bins, 0.0)};
  for (std::size_t m = 0; m < left.rows; ++m) {
    for (std::size_t k = 1; k < bins; ++k) {
      const double a = left(m, k).real(), b = left(m, k).imag();
      const double c = right(m, k).real(), d = right(m, k).imag();
      const double y = a * d - b * c;
      const double x = a * c + b * d;
      const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) * fs /
                           static_cast<double>(n_fft);
      out(m, k) = (y == 0.0) ? 0.0 : std::atan2(y, x) / omega;
    }
  }
  return out;
}

RealMap Columns(const RealMap& m, std::size_t first, std::size_t count) {
  if (first + count > m.cols) throw ShapeError("column range exceeds map width");
  RealMap out{m.rows, count, std::vector<double>(m.rows * count)};
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < count; ++c) out(r, c) = m(r, first + c);
  }
  return out;
}

RealMap DbDifference(const RealMap& s_left, const RealMap& s_right) {
  if (s_left.rows != s_right.rows || s_left.cols != s_right.cols) {
    throw ShapeError("ild-map: left/right shapes differ");
  }
  RealMap out{s_left.rows, s_left.cols, std::vector<double>(s_left.data.size())};
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = s_right.data[i] - s_left.data[i];
  }
  return out;
}

RealMap MelMap(const RealMap& values, const MelBank& bank) {
  if (values.cols != bank.n_bins()) {
    throw ShapeError("mel map: matrix has " + std::to_string(values.cols) +
                     " columns, bank expects " + std::to_string(bank.n_bins()));
  }
  return RealMap{values.rows, bank.n_mel(), bank.Apply(values.data, values.rows)};
}

const std::array<const char*, kNumChannels>& ChannelNames() {
  static const std::array<const char*, kNumChannels> names = {
      "ms_l", "ms_r", "v_l", "v_r", "itd", "ild", "sc_l", "sc_r"};
  return names;
}

RealMap Btff::Channel(std::size_t ch) const {
  RealMap m{frames, kMelBins, std::vector<double>(frames * kMelBins)};
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t b = 0; b < kMelBins; ++b) m(t, b) = at(t, b, ch);
  }
  return m;
}

BtffBanks::BtffBanks(const StftParams& p, const BtffBands& bands)
    : full(kMelBins, 0.0, p.fs / 2.0, p.n_fft, p.fs),
      itd(kMelBins, 0.0, bands.itd_hi_hz, p.n_fft, p.fs),
      ild_sc(kMelBins, bands.ild_sc_lo_hz, p.fs / 2.0, p.n_fft, p.fs) {}

Btff ExtractBtff(std::span<const double> left, std::span<const double> right,
                 const StftParams& p, const BtffBands& bands) {
  if (left.size() != right.size()) {
    throw InvalidArgument("btff: left and right channels differ in length");
  }
  const BtffBanks banks(p, bands);
  const Stft pl = ComputeStft(left, p);
  const Stft pr = ComputeStft(right, p);
  const RealMap sl = DbMagnitude(pl);
  const RealMap sr = DbMagnitude(pr);

  const auto sub = [](const RealMap& m, const MelBank& bank) {
    return MelMap(Columns(m, bank.first_bin(), bank.n_bins()), bank);
  };
  std::array<RealMap, kNumChannels> maps;
  maps[kMsLeft] = sub(sl, banks.full);
  maps[kMsRight] = sub(sr, banks.full);
  maps[kVLeft] = sub(VMap(sl), banks.full);
  maps[kVRight] = sub(VMap(sr), banks.full);
  maps[kItd] = MelMap(ItdPerBin(pl, pr, banks.itd.last_bin() + 1, p.fs), banks.itd);
  maps[kIld] = sub(DbDifference(sl, sr), banks.ild_sc);
  maps[kScLeft] = sub(sl, banks.ild_sc);
  maps[kScRight] = sub(sr, banks.ild_sc);

  Btff out;
  out.frames = pl.rows;
  out.frame_hop_s = static_cast<double>(p.hop) / p.fs;
  out.data.resize(out.frames * kMelBins * kNumChannels);
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    for (std::size_t t = 0; t < out.frames; ++t) {
      for (std::size_t b = 0; b < kMelBins; ++b) out.at(t, b, c) = maps[c](t, b);
    }
  }
  return out;
}

void Standardize(Btff& b) {
  const double n = static_cast<double>(b.frames * kMelBins);
  if (n == 0) return;
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    double mean = 0.0;
    for (std::size_t i = c; i < b.data.size(); i += kNumChannels) mean += b.data[i];
    mean /= n;
    double var = 0.0;
    for (std::size_t i = c; i < b.data.size(); i += kNumChannels) {
      var += (b.data[i] - mean) * (b.data[i] - mean);
    }
    const double sd = std::sqrt(var / n);
    for (std::size_t i = c; i < b.data.size(); i += kNumChannels) {
      b.data[i] = sd > 0.0 ? (b.data[i] - mean) / sd : b.data[i] - mean;
    }
  }
}

void SaveBtff(const std::string& path, const Btff& b) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os.write("BTFF", 4);
  WriteU32(os, static_cast<std::uint32_t>(b.frames));
  WriteU32(os, kMelBins);
  WriteU32(os, kNumChannels);
  WriteF32(os, static_cast<float>(b.frame_hop_s));
  for (double v : b.data) WriteF32(os, static_cast<float>(v));
  if (!os) throw IoError("write failed: " + path);
}

Btff LoadBtff(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "BTFF") {
    throw Error(ErrorKind::kParse, path + ": not a BTFF file");
  }
  Btff b;
  b.frames = ReadU32(is, path);
  const auto bins = ReadU32(is, path);
  const auto channels = ReadU32(is, path);
  if (bins != kMelBins || channels != kNumChannels) {
    throw ShapeError(path + ": expected 64 bins x 8 channels");
  }
  b.frame_hop_s = ReadF32(is, path);
  b.data.resize(b.frames * kMelBins * kNumChannels);
  for (double& v : b.data) v = ReadF32(is, path);
  return b;
}

std::vector<std::string> SaveBtffCsv(const std::string& prefix, const Btff& b) {
  std::vector<std::string> paths;
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const std::string path = prefix + "_" + ChannelNames()[c] + ".csv";
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << std::setprecision(9);
    for (std::size_t t = 0; t < b.frames; ++t) {
      for (std::size_t k = 0; k < kMelBins; ++k) {
        os << (k ? "," : "") << b.at(t, k, c);
      }
      os << '\n';
    }
    paths.push_back(path);
  }
  return paths;
}

}  // namespace biseld::btff
