// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include "echomap/fft.hpp"
#include "echomap/geometry.hpp"

#include <span>
#include <vector>

namespace echomap {

/// How the metric search interval maps onto a delay in samples.
enum class RangeMode {
  RoundTrip,   // tau = 2 * range * fs / c (reflector range)
  PathLength,  // tau = path * fs / c (total propagation path)
};

struct FreqDomainConfig {
  std::size_t dft_len = 32768;  // K
  double search_min_m = 1.0;
  double search_max_m = 2.0;
  double grid_step = 1.0;       // samples
  RangeMode range_mode = RangeMode::RoundTrip;
  double sample_rate = 22050.0;
  double speed_of_sound = 343.0;
  bool subsample_refine = false;

  void validate(std::size_t observation_len = 0) const;
  double min_tau() const;
  double max_tau() const;
  // Candidate delays, ascending.
  std::vector<double> tau_grid() const;
};

struct ToaEstimate {
  double tau = 0.0;        // samples
  double gain = 0.0;
  double score = 0.0;      // Re{Y^H Zbar(tau)} at the estimate
  double confidence = 0.0; // score over a robust spread of the objective across the grid
  bool at_boundary = false;
  bool low_score = false;
};

// Estimates below this confidence (or on an interval edge) are flagged low_score.
inline constexpr double kLowScoreConfidence = 5.0;

// Z(tau): element k = exp(-j tau 2 pi k / K).
std::vector<cplx> delay_phasor(double tau, std::size_t dft_len);

// Re{Y^H (Z(tau) .* S)} evaluated directly in the frequency domain.
double toa_objective(std::span<const cplx> obs, std::span<const cplx> probe, double tau);

// Least-squares gain of the delayed probe at tau; throws std::domain_error for a zero-energy probe.
double estimate_gain(std::span<const cplx> obs, double tau, std::span<const cplx> probe);

// Objective over cfg.tau_grid(); integer grids are evaluated with one FFT.
std::vector<double> objective_curve(std::span<const cplx> obs, std::span<const cplx> probe,
                                    const FreqDomainConfig& cfg);

ToaEstimate estimate_toa(std::span<const cplx> obs, std::span<const cplx> probe,
                         const FreqDomainConfig& cfg);

// Time-domain convenience wrapper: transforms both signals with K = cfg.dft_len.
ToaEstimate estimate_toa(std::span<const double> observation, const ProbeSignal& probe,
                         const FreqDomainConfig& cfg);

// Cyclic (RELAX-style) estimation of `num_reflections` echoes, sorted by ascending tau.
std::vector<ToaEstimate> sequential_relax(std::span<const cplx> obs, std::span<const cplx> probe,
                                          int num_reflections, const FreqDomainConfig& cfg,
                                          bool refine = true);

// || Y - sum_r g_r Zbar(tau_r) ||^2
double residual_energy(std::span<const cplx> obs, std::span<const cplx> probe,
                       const std::vector<ToaEstimate>& components);

// Converts a delay in samples to reflector range (round trip) in metres.
double tau_to_range(double tau, double sample_rate, double speed_of_sound);

}  // namespace echomap
