// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/baseline.hpp"

#include "echomap/doa.hpp"
#include "echomap/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace echomap {

EstimatedRir estimate_rir_dual_channel(std::span<const double> recording, const ProbeSignal& probe,
                                       const WelchConfig& cfg) {
  if (cfg.segment_len < 2 || cfg.hop == 0 || cfg.hop > cfg.segment_len)
    throw std::invalid_argument("estimate_rir_dual_channel: invalid Welch segmentation");
  if (!(cfg.reg >= 0.0)) throw std::invalid_argument("estimate_rir_dual_channel: reg must be >= 0");
  const std::size_t n = cfg.segment_len;
  const std::size_t len = std::min(recording.size(), probe.samples.size());
  if (len < n) throw std::invalid_argument("estimate_rir_dual_channel: signals shorter than a segment");

  const auto w = hann_symmetric(n);
  std::vector<cplx> s_ys(n, cplx{});
  std::vector<double> s_ss(n, 0.0);
  std::vector<cplx> ybuf(n);
  std::vector<cplx> sbuf(n);
  for (std::size_t start = 0; start + n <= len; start += cfg.hop) {
    for (std::size_t i = 0; i < n; ++i) {
      ybuf[i] = w[i] * recording[start + i];
      sbuf[i] = w[i] * probe.samples[start + i];
    }
    const auto Y = fft(ybuf);
    const auto S = fft(sbuf);
    for (std::size_t k = 0; k < n; ++k) {
      s_ys[k] += Y[k] * std::conj(S[k]);
      s_ss[k] += std::norm(S[k]);
    }
  }
  const double peak = *std::max_element(s_ss.begin(), s_ss.end());
  if (!(peak > 0.0)) throw std::domain_error("estimate_rir_dual_channel: zero-energy probe");

  std::vector<cplx> h(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = s_ys[k] / (s_ss[k] + cfg.reg * peak);
  return {real_inverse(h), probe.sample_rate};
}

ToaEstimate peak_pick(const EstimatedRir& rir, const FreqDomainConfig& interval) {
  std::vector<std::size_t> idx;
  for (double tau : interval.tau_grid()) {
    const auto t = static_cast<long long>(std::llround(tau));
    if (t >= 0 && t < static_cast<long long>(rir.taps.size())) idx.push_back(static_cast<std::size_t>(t));
  }
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty()) throw std::invalid_argument("peak_pick: empty search interval");
  std::size_t best = idx.front();
  for (std::size_t t : idx) {
    if (std::abs(rir.taps[t]) > std::abs(rir.taps[best])) best = t;
  }
  ToaEstimate est;
  est.tau = static_cast<double>(best);
  est.gain = rir.taps[best];
  est.score = std::abs(rir.taps[best]);
  est.at_boundary = best == idx.front() || best == idx.back();
  est.low_score = est.at_boundary;
  return est;
}

}  // namespace echomap
