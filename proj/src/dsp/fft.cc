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

#include "dsp/fft.h"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "common/error.h"

namespace biseld::dsp {
namespace {

enum class PlanKind { kR2C, kC2CForward, kC2CBackward };

// FFTW planning is not thread-safe, execution with the new-array interface
// is. Plans are created once per (kind, size) and never destroyed.
fftw_plan GetPlan(PlanKind kind, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(kind), n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = nullptr;
  switch (kind) {
    case PlanKind::kR2C: {
      double* in = fftw_alloc_real(n);
      fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
      plan = fftw_plan_dft_r2c_1d(n, in, out, flags);
      fftw_free(in);
      fftw_free(out);
      break;
    }
    case PlanKind::kC2CForward:
    case PlanKind::kC2CBackward: {
      fftw_complex* in = fftw_alloc_complex(n);
      fftw_complex* out = fftw_alloc_complex(n);
      plan = fftw_plan_dft_1d(
          n, in, out,
          kind == PlanKind::kC2CForward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
      fftw_free(in);
      fftw_free(out);
      break;
    }
  }
  if (plan == nullptr) throw DomainError("FFTW failed to plan size " + std::to_string(n));
  cache.emplace(key, plan);
  return plan;
}

fftw_complex* AsFftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void RealFftHalf(std::span<const double> frame, std::span<Complex> out) {
  const std::size_t n = frame.size();
  if (n == 0 || out.size() != n / 2 + 1) {
    throw InvalidArgument("RealFftHalf: output must hold n/2+1 bins");
  }
  std::vector<double> in(frame.begin(), frame.end());
  fftw_execute_dft_r2c(GetPlan(PlanKind::kR2C, static_cast<int>(n)), in.data(),
                       AsFftw(out.data()));
}

ComplexSpectrum ForwardFft(std::span<const double> x, std::size_t n_fft,
                           double fs) {
  if (n_fft == 0 || n_fft < x.size()) {
    throw InvalidArgument("forward_fft: n_fft (" + std::to_string(n_fft) +
                          ") must be >= input length (" +
                          std::to_string(x.size()) + ")");
  }
  std::vector<double> padded(n_fft, 0.0);
  std::copy(x.begin(), x.end(), padded.begin());
  std::vector<Complex> half(n_fft / 2 + 1);
  RealFftHalf(padded, half);
  ComplexSpectrum s;
  s.fs = fs;
  s.bins.resize(n_fft);
  for (std::size_t k = 0; k < half.size(); ++k) s.bins[k] = half[k];
  for (std::size_t k = half.size(); k < n_fft; ++k) {
    s.bins[k] = std::conj(half[n_fft - k]);
  }
  return s;
}

std::vector<double> InverseFft(const ComplexSpectrum& s) {
  const std::size_t n = s.bins.size();
  if (n == 0) throw InvalidArgument("inverse_fft: empty spectrum");
  std::vector<Complex> in(s.bins);
  std::vector<Complex> out(n);
  fftw_execute_dft(GetPlan(PlanKind::kC2CBackward, static_cast<int>(n)),
                   AsFftw(in.data()), AsFftw(out.data()));
  std::vector<double> x(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = out[i].real() * scale;
  return x;
}

std::vector<double> ConvolveSame(std::span<const double> x,
                                 std::span<const double> h) {
  if (x.empty() || h.empty()) return std::vector<double>(x.size(), 0.0);
  std::size_t n = 1;
  while (n < x.size() + h.size() - 1) n <<= 1;
  ComplexSpectrum a = ForwardFft(x, n);
  ComplexSpectrum b = ForwardFft(h, n);
  for (std::size_t k = 0; k < n; ++k) a.bins[k] *= b.bins[k];
  std::vector<double> y = InverseFft(a);
  y.resize(x.size());
  return y;
}

}  // namespace biseld::dsp
