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

#include "cues/report.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "common/error.h"
#include "common/parallel.h"

namespace biseld::cues {
namespace {

namespace fs = std::filesystem;

std::string Num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::ofstream OpenCsv(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw IoError("cannot write " + p.string());
  return os;
}

std::size_t NearestBin(const ComplexSpectrum& s, double f) {
  return static_cast<std::size_t>(std::lround(f * static_cast<double>(s.size()) / s.fs));
}

}  // namespace

AnalyzeSummary AnalyzeDatabase(const std::vector<HrirPair>& db_in, const std::string& out_dir,
                               const AnalyzeOptions& opts) {
  if (db_in.empty()) throw InvalidArgument("analyze: empty database");
  std::vector<HrirPair> db = db_in;
  std::sort(db.begin(), db.end(), [](const HrirPair& a, const HrirPair& b) {
    return std::pair(a.direction.azimuth_deg, a.direction.elevation_deg) <
           std::pair(b.direction.azimuth_deg, b.direction.elevation_deg);
  });
  const double fs = db.front().fs;
  for (const auto& p : db) {
    p.Validate();
    if (p.fs != fs) throw InvalidArgument("analyze: mixed sampling rates");
  }
  for (double f : opts.narrowband_hz) {
    if (!(f >= 0.0 && f <= fs / 2)) throw InvalidArgument("analyze: narrowband frequency beyond Nyquist");
  }
  for (double f : opts.hpd_hz) {
    if (!(f >= 0.0 && f <= fs / 2)) throw InvalidArgument("analyze: HPD frequency beyond Nyquist");
  }
  const double wb_hi = std::min(opts.wideband_hi_hz, fs / 2);

  struct Row {
    double itd = 0.0;
    double wide = 0.0;
    std::vector<double> narrow;
  };
  std::vector<Row> rows(db.size());
  ParallelFor(db.size(), [&](std::size_t i) {
    Row& r = rows[i];
    r.itd = Itd(db[i], opts.itd);
    const auto [l, rr] = PairSpectra(db[i], std::max(opts.ild_pad, db[i].size()));
    r.wide = IldWideband(l, rr, opts.wideband_lo_hz, wb_hi);
    for (double f : opts.narrowband_hz) {
      const std::size_t k = NearestBin(l, f);
      const double ml = std::abs(l.bins[k]), mr = std::abs(rr.bins[k]);
      r.narrow.push_back(ml > 0.0 && mr > 0.0
                             ? 20.0 * (std::log10(mr) - std::log10(ml))
                             : std::numeric_limits<double>::quiet_NaN());
    }
  });

  fs::create_directories(out_dir);
  AnalyzeSummary summary;
  summary.directions = db.size();
  {
    const fs::path p = fs::path(out_dir) / "itd.csv";
    auto os = OpenCsv(p);
    os << "azimuth,elevation,itd_us\n";
    for (std::size_t i = 0; i < db.size(); ++i) {
      os << Num(db[i].direction.azimuth_deg) << ',' << Num(db[i].direction.elevation_deg) << ','
         << Num(rows[i].itd * 1e6) << '\n';
    }
    summary.outputs.push_back(p.string());
  }
  {
    const fs::path p = fs::path(out_dir) / "ild.csv";
    auto os = OpenCsv(p);
    os << "azimuth,elevation,wideband_db";
    for (double f : opts.narrowband_hz) os << ",narrowband_" << Num(f) << "hz_db";
    os << '\n';
    for (std::size_t i = 0; i < db.size(); ++i) {
      os << Num(db[i].direction.azimuth_deg) << ',' << Num(db[i].direction.elevation_deg) << ','
         << Num(rows[i].wide);
      for (double v : rows[i].narrow) os << ',' << Num(v);
      os << '\n';
    }
    summary.outputs.push_back(p.string());
  }

  // Median plane: front (0) and back (180) directions.
  {
    const fs::path p = fs::path(out_dir) / "sc.csv";
    auto os = OpenCsv(p);
    os << "ear,azimuth,elevation,kind,frequency_hz,level_db\n";
    std::vector<std::size_t> median;
    for (std::size_t i = 0; i < db.size(); ++i) {
      const double az = db[i].direction.azimuth_deg;
      if (az == 0.0 || az == 180.0) median.push_back(i);
    }
    summary.median_directions = median.size();
    const double hi = std::min(opts.feature_band.hi_hz, fs / 2);
    const FeatureBand band{opts.feature_band.lo_hz, hi};
    std::vector<std::array<std::vector<SpectralFeature>, 2>> found(median.size());
    if (band.lo_hz < band.hi_hz) {
      ParallelFor(median.size(), [&](std::size_t m) {
        const HrirPair& h = db[median[m]];
        for (int ear = 0; ear < 2; ++ear) {
          const auto prtf = ExtractPrtf(ear == 0 ? h.left : h.right, fs, opts.prtf_window_ms);
          found[m][ear] = FindSpectralFeatures(prtf.spectrum, band, opts.min_prominence_db,
                                               h.direction.elevation_deg);
        }
      });
    }
    for (int ear = 0; ear < 2; ++ear) {
      for (std::size_t m = 0; m < median.size(); ++m) {
        const HrirPair& h = db[median[m]];
        for (const auto& f : found[m][ear]) {
          os << (ear == 0 ? "left" : "right") << ',' << Num(h.direction.azimuth_deg) << ','
             << Num(h.direction.elevation_deg) << ','
             << (f.kind == FeatureKind::kPeak ? "peak" : "notch") << ',' << Num(f.frequency_hz)
             << ',' << Num(f.level_db) << '\n';
        }
      }
    }
    summary.outputs.push_back(p.string());
  }

  // Horizontal plane directivity, present only when the frontal HRTF is.
  {
    const fs::path p = fs::path(out_dir) / "hpd.csv";
    auto os = OpenCsv(p);
    os << "ear,frequency_hz,azimuth,level_db\n";
    std::map<double, ComplexSpectrum> left, right;
    for (const auto& h : db) {
      if (h.direction.elevation_deg != 0.0) continue;
      left[h.direction.azimuth_deg] = dsp::ForwardFft(h.left, h.size(), fs);
      right[h.direction.azimuth_deg] = dsp::ForwardFft(h.right, h.size(), fs);
    }
    summary.horizontal_directions = left.size();
    if (left.count(0.0)) {
      for (int ear = 0; ear < 2; ++ear) {
        for (double f : opts.hpd_hz) {
          const BeamPattern bp = Hpd(ear == 0 ? left : right, f);
          for (const auto& [az, lvl] : bp.levels) {
            os << (ear == 0 ? "left" : "right") << ',' << Num(f) << ',' << Num(az) << ','
               << Num(lvl) << '\n';
          }
        }
      }
    }
    summary.outputs.push_back(p.string());
  }
  return summary;
}

}  // namespace biseld::cues
