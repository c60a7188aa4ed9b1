// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace echomap {

namespace {

// FFTW planning is not thread-safe; executing an existing plan on new arrays is.
// Plans are created in-place and unaligned so results never depend on buffer
// alignment, which keeps outputs bit-identical across runs and thread counts.
class PlanCache {
public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find({n, sign});
    if (it != plans_.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(n));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw: failed to create plan");
    plans_.emplace(std::make_pair(n, sign), plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void transform_in_place(std::vector<cplx>& data, int sign) {
  if (data.empty()) return;
  fftw_plan plan = plan_cache().get(static_cast<int>(data.size()), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<cplx> fft(std::span<const cplx> x) {
  std::vector<cplx> out(x.begin(), x.end());
  transform_in_place(out, FFTW_FORWARD);
  return out;
}

std::vector<cplx> ifft(std::span<const cplx> X) {
  std::vector<cplx> out(X.begin(), X.end());
  transform_in_place(out, FFTW_BACKWARD);
  const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<cplx> real_spectrum(std::span<const double> x, std::size_t n) {
  std::vector<cplx> buf(n, cplx{0.0, 0.0});
  const std::size_t m = std::min(n, x.size());
  for (std::size_t i = 0; i < m; ++i) buf[i] = x[i];
  transform_in_place(buf, FFTW_FORWARD);
  return buf;
}

std::vector<double> real_inverse(std::span<const cplx> X) {
  auto t = ifft(X);
  std::vector<double> out(t.size());
  std::transform(t.begin(), t.end(), out.begin(), [](const cplx& v) { return v.real(); });
  return out;
}

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b,
                                 std::size_t out_len) {
  if (a.empty() || b.empty() || out_len == 0) return std::vector<double>(out_len, 0.0);
  const std::size_t full = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(full);
  auto A = real_spectrum(a, n);
  auto B = real_spectrum(b, n);
  for (std::size_t k = 0; k < n; ++k) A[k] *= B[k];
  auto y = real_inverse(A);
  y.resize(out_len, 0.0);
  if (out_len > full) std::fill(y.begin() + static_cast<std::ptrdiff_t>(full), y.end(), 0.0);
  return y;
}

}  // namespace echomap
