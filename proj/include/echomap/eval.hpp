// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include "echomap/baseline.hpp"
#include "echomap/pipeline.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace echomap {

enum class SweepVariable { SnrDb, T60 };

std::string to_string(SweepVariable v);

struct AccuracyTolerance {
  double toa_samples = 5.0;
  double doa_steps = 5.0;  // azimuth grid steps
};

/// Monte-Carlo sweep definition. The swept quantity overrides noise.snr_db or room.t60.
struct ExperimentSpec {
  RoomSpec room{10.0, 8.0, 5.0};
  Pose pose{8.5, 4.0, 0.0};  // 1.5 m from the x = 10 wall
  PipelineConfig pipeline;
  NoiseModel noise;          // snr_db holds the fixed SNR of a T60 sweep
  WelchConfig welch;
  std::size_t probe_active_len = 1500;
  std::size_t probe_total_len = 20000;
  std::uint64_t probe_seed = 1;
  SweepVariable variable = SweepVariable::SnrDb;
  std::vector<double> values;
  int trials = 50;
  std::uint64_t seed = 0;
  AccuracyTolerance tolerance;

  void validate() const;
};

struct TrialRecord {
  double value = 0.0;
  int trial = 0;
  std::uint64_t noise_seed = 0;
  double snls_tau = 0.0;
  double snls_azimuth = 0.0;
  double baseline_tau = 0.0;
  double true_tau = 0.0;      // nearest lateral-wall echo to the S-NLS estimate
  double true_azimuth = 0.0;  // nearest lateral-wall direction to the S-NLS azimuth
  bool snls_toa_ok = false;
  bool snls_doa_ok = false;
  bool baseline_toa_ok = false;
};

struct MethodCurve {
  std::string method;
  std::vector<double> toa_accuracy;
  std::vector<double> doa_accuracy;  // empty for methods without a DOA output
};

struct AccuracyCurve {
  SweepVariable variable = SweepVariable::SnrDb;
  std::vector<double> values;
  std::vector<int> trials;
  std::vector<MethodCurve> methods;  // "snls", then "baseline"

  const MethodCurve& method(const std::string& name) const;
};

struct SweepResult {
  AccuracyCurve curve;
  std::vector<TrialRecord> records;  // ordered by (value index, trial)
};

// Seed for one (sweep value, trial) cell.
std::uint64_t trial_seed(std::uint64_t seed, double value, int trial);

// Wrapped absolute azimuth difference.
double angle_distance(double a, double b);

SweepResult run_sweep(const ExperimentSpec& spec, int jobs = 1);
SweepResult run_snr_sweep(ExperimentSpec spec, int jobs = 1);
SweepResult run_t60_sweep(ExperimentSpec spec, int jobs = 1);

// Half-width of one binomial standard error for a proportion p over n trials.
double binomial_stderr(double p, int n);

struct TimingReport {
  std::string machine;
  int trials = 0;
  double snls_mean_s = 0.0;      // TOA grid search plus SRP scan
  double baseline_mean_s = 0.0;  // dual-channel RIR estimate plus peak picking
};

// Times both methods on the first sweep value (or the configured noise level if none).
TimingReport time_methods(const ExperimentSpec& spec);

std::string machine_descriptor();

}  // namespace echomap
