// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/toa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace echomap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double range_to_tau(double metres, const FreqDomainConfig& cfg) {
  const double factor = cfg.range_mode == RangeMode::RoundTrip ? 2.0 : 1.0;
  return factor * metres * cfg.sample_rate / cfg.speed_of_sound;
}

double probe_energy(std::span<const cplx> probe) {
  double e = 0.0;
  for (const auto& s : probe) e += std::norm(s);
  return e;
}

void subtract_component(std::vector<cplx>& residual, std::span<const cplx> probe, double tau,
                        double gain) {
  const auto z = delay_phasor(tau, probe.size());
  for (std::size_t k = 0; k < residual.size(); ++k) residual[k] -= gain * z[k] * probe[k];
}

double robust_spread(std::vector<double> values) {
  if (values.size() < 3) return 0.0;
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double median = *mid;
  for (auto& v : values) v = std::abs(v - median);
  std::nth_element(values.begin(), mid, values.end());
  return 1.4826 * *mid;
}

}  // namespace

void FreqDomainConfig::validate(std::size_t observation_len) const {
  if (dft_len == 0) throw std::invalid_argument("estimator.dft_len: must be > 0");
  if (observation_len > dft_len)
    throw std::invalid_argument("estimator.dft_len: shorter than the observation");
  if (!(search_min_m > 0.0)) throw std::invalid_argument("estimator.search_min_m: must be > 0");
  if (!(search_max_m > search_min_m))
    throw std::invalid_argument("estimator.search_max_m: must exceed search_min_m");
  if (!(grid_step > 0.0)) throw std::invalid_argument("estimator.grid_step: must be > 0");
  if (!(sample_rate > 0.0) || !(speed_of_sound > 0.0))
    throw std::invalid_argument("estimator: sample_rate and speed_of_sound must be > 0");
  if (tau_grid().empty()) throw std::invalid_argument("estimator: empty search grid");
}

double FreqDomainConfig::min_tau() const { return range_to_tau(search_min_m, *this); }
double FreqDomainConfig::max_tau() const { return range_to_tau(search_max_m, *this); }

std::vector<double> FreqDomainConfig::tau_grid() const {
  std::vector<double> grid;
  if (!(grid_step > 0.0)) return grid;
  const double lo = min_tau();
  const double hi = max_tau();
  const double first = std::ceil(lo / grid_step - 1e-9);
  const double last = std::floor(hi / grid_step + 1e-9);
  for (double i = first; i <= last; i += 1.0) grid.push_back(i * grid_step);
  return grid;
}

std::vector<cplx> delay_phasor(double tau, std::size_t dft_len) {
  std::vector<cplx> z(dft_len);
  const double k_scale = -kTwoPi * tau / static_cast<double>(dft_len);
  for (std::size_t k = 0; k < dft_len; ++k) {
    // Reduce the phase modulo 2*pi in exact integer arithmetic when tau is integral.
    double phase;
    if (tau == std::floor(tau) && std::abs(tau) < 9e15) {
      const auto t = static_cast<long long>(tau);
      const auto kk = static_cast<long long>(k);
      const long long n = static_cast<long long>(dft_len);
      const long long r = ((t % n) * (kk % n)) % n;
      phase = -kTwoPi * static_cast<double>(r) / static_cast<double>(n);
    } else {
      phase = k_scale * static_cast<double>(k);
    }
    z[k] = std::polar(1.0, phase);
  }
  return z;
}

double toa_objective(std::span<const cplx> obs, std::span<const cplx> probe, double tau) {
  if (obs.size() != probe.size())
    throw std::invalid_argument("toa_objective: spectrum lengths differ");
  const auto z = delay_phasor(tau, obs.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < obs.size(); ++k) acc += (std::conj(obs[k]) * z[k] * probe[k]).real();
  return acc;
}

double estimate_gain(std::span<const cplx> obs, double tau, std::span<const cplx> probe) {
  const double energy = probe_energy(probe);
  if (!(energy > 0.0)) throw std::domain_error("estimate_gain: zero-energy probe, gain undefined");
  const auto z = delay_phasor(tau, obs.size());
  cplx yz{0.0, 0.0};  // Y^H Zbar
  cplx zy{0.0, 0.0};  // Zbar^H Y
  for (std::size_t k = 0; k < obs.size(); ++k) {
    const cplx zbar = z[k] * probe[k];
    yz += std::conj(obs[k]) * zbar;
    zy += std::conj(zbar) * obs[k];
  }
  return ((yz + zy) / (2.0 * energy)).real();
}

std::vector<double> objective_curve(std::span<const cplx> obs, std::span<const cplx> probe,
                                    const FreqDomainConfig& cfg) {
  if (obs.size() != probe.size())
    throw std::invalid_argument("objective_curve: spectrum lengths differ");
  const auto grid = cfg.tau_grid();
  std::vector<double> values(grid.size());
  const bool integer_grid = cfg.grid_step == std::floor(cfg.grid_step);
  if (integer_grid) {
    // sum_k conj(Y_k) S_k e^{-j 2 pi k tau / K} is the forward DFT of conj(Y) .* S at tau.
    std::vector<cplx> a(obs.size());
    for (std::size_t k = 0; k < obs.size(); ++k) a[k] = std::conj(obs[k]) * probe[k];
    const auto corr = fft(a);
    const auto n = static_cast<long long>(obs.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      long long t = static_cast<long long>(grid[i]) % n;
      if (t < 0) t += n;
      values[i] = corr[static_cast<std::size_t>(t)].real();
    }
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = toa_objective(obs, probe, grid[i]);
  }
  return values;
}

ToaEstimate estimate_toa(std::span<const cplx> obs, std::span<const cplx> probe,
                         const FreqDomainConfig& cfg) {
  cfg.validate();
  if (obs.size() != cfg.dft_len || probe.size() != cfg.dft_len)
    throw std::invalid_argument("estimate_toa: spectra must have dft_len bins");
  const auto grid = cfg.tau_grid();
  const auto values = objective_curve(obs, probe, cfg);

  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }

  ToaEstimate est;
  est.tau = grid[best];
  est.score = values[best];
  est.at_boundary = best == 0 || best + 1 == values.size();

  if (cfg.subsample_refine && !est.at_boundary) {
    const double ym = values[best - 1];
    const double y0 = values[best];
    const double yp = values[best + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) {
      const double delta = 0.5 * (ym - yp) / denom;
      est.tau = grid[best] + std::clamp(delta, -0.5, 0.5) * cfg.grid_step;
      est.score = toa_objective(obs, probe, est.tau);
    }
  }

  est.gain = estimate_gain(obs, est.tau, probe);
  const double spread = robust_spread(values);
  est.confidence = spread > 0.0 ? est.score / spread : 0.0;
  est.low_score = est.at_boundary || est.confidence < kLowScoreConfidence;
  return est;
}

ToaEstimate estimate_toa(std::span<const double> observation, const ProbeSignal& probe,
                         const FreqDomainConfig& cfg) {
  cfg.validate(observation.size());
  const auto y = real_spectrum(observation, cfg.dft_len);
  const auto s = real_spectrum(probe.samples, cfg.dft_len);
  return estimate_toa(y, s, cfg);
}

std::vector<ToaEstimate> sequential_relax(std::span<const cplx> obs, std::span<const cplx> probe,
                                          int num_reflections, const FreqDomainConfig& cfg,
                                          bool refine) {
  if (num_reflections < 1) throw std::invalid_argument("sequential_relax: R must be >= 1");
  if (static_cast<std::size_t>(num_reflections) > cfg.tau_grid().size())
    throw std::invalid_argument("sequential_relax: R exceeds the search grid size");

  std::vector<ToaEstimate> comps;
  std::vector<cplx> residual(obs.begin(), obs.end());
  for (int r = 0; r < num_reflections; ++r) {
    const auto est = estimate_toa(residual, probe, cfg);
    subtract_component(residual, probe, est.tau, est.gain);
    comps.push_back(est);
  }

  if (refine && num_reflections > 1) {
    for (std::size_t r = 0; r < comps.size(); ++r) {
      std::vector<cplx> others(obs.begin(), obs.end());
      for (std::size_t j = 0; j < comps.size(); ++j) {
        if (j != r) subtract_component(others, probe, comps[j].tau, comps[j].gain);
      }
      comps[r] = estimate_toa(others, probe, cfg);
    }
  }

  std::stable_sort(comps.begin(), comps.end(),
                   [](const ToaEstimate& a, const ToaEstimate& b) { return a.tau < b.tau; });
  return comps;
}

double residual_energy(std::span<const cplx> obs, std::span<const cplx> probe,
                       const std::vector<ToaEstimate>& components) {
  std::vector<cplx> residual(obs.begin(), obs.end());
  for (const auto& c : components) subtract_component(residual, probe, c.tau, c.gain);
  double e = 0.0;
  for (const auto& v : residual) e += std::norm(v);
  return e;
}

double tau_to_range(double tau, double sample_rate, double speed_of_sound) {
  return speed_of_sound * tau / (2.0 * sample_rate);
}

}  // namespace echomap
