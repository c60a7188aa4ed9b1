// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/eval.hpp"

#include "echomap/parallel.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace echomap {

std::string to_string(SweepVariable v) { return v == SweepVariable::SnrDb ? "snr_db" : "t60_s"; }

void ExperimentSpec::validate() const {
  room.validate();
  noise.validate();
  if (trials < 1) throw std::invalid_argument("experiment.trials: must be >= 1");
  if (values.empty()) throw std::invalid_argument("experiment.values: must be nonempty");
  if (probe_active_len == 0 || probe_active_len > probe_total_len)
    throw std::invalid_argument("probe.active_len: must be in (0, total_len]");
  pipeline.validate(probe_total_len);
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("experiment.values: must be finite");
    if (variable == SweepVariable::T60 && !(v >= 0.0))
      throw std::invalid_argument("experiment.t60_values: must be >= 0");
  }
  if (!(tolerance.toa_samples > 0.0) || !(tolerance.doa_steps > 0.0))
    throw std::invalid_argument("experiment.tolerance: must be > 0");
}

const MethodCurve& AccuracyCurve::method(const std::string& name) const {
  for (const auto& m : methods) {
    if (m.method == name) return m;
  }
  throw std::out_of_range("AccuracyCurve: no method " + name);
}

std::uint64_t trial_seed(std::uint64_t seed, double value, int trial) {
  return mix_seed(seed, std::bit_cast<std::uint64_t>(value), static_cast<std::uint64_t>(trial));
}

double angle_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

namespace {

struct Cell {
  RoomSpec room;
  RirSet rirs;
  std::vector<WallEcho> echoes;
};

bool toa_hit(const std::vector<WallEcho>& echoes, double tau, double tol, double* truth) {
  const auto& e = closest_echo(echoes, tau);
  if (truth != nullptr) *truth = e.tau;
  return std::abs(e.tau - tau) <= tol;
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec, int jobs) {
  spec.validate();
  const auto probe = generate_probe(spec.probe_active_len, spec.probe_total_len,
                                    spec.pipeline.geom.sample_rate, spec.probe_seed);
  const auto& cfg = spec.pipeline;

  std::vector<Cell> cells(spec.values.size());
  parallel_for(cells.size(), jobs, [&](std::size_t v) {
    Cell c;
    c.room = spec.room;
    if (spec.variable == SweepVariable::T60) c.room.t60 = spec.values[v];
    c.rirs = pose_rirs(spec.pose, c.room, cfg);
    c.echoes = lateral_wall_echoes(spec.pose, c.room, cfg);
    cells[v] = std::move(c);
  });

  const auto trials = static_cast<std::size_t>(spec.trials);
  SweepResult res;
  res.records.resize(cells.size() * trials);
  const double doa_tol = spec.tolerance.doa_steps * cfg.doa.grid.azimuth_step;
  parallel_for(res.records.size(), jobs, [&](std::size_t task) {
    const std::size_t v = task / trials;
    const int t = static_cast<int>(task % trials);
    const Cell& cell = cells[v];
    NoiseModel noise = spec.noise;
    if (spec.variable == SweepVariable::SnrDb) noise.snr_db = spec.values[v];
    noise.seed = trial_seed(spec.seed, spec.values[v], t);

    const auto rec = observe(cell.rirs, probe, noise, cfg);
    const auto est = estimate_echo(rec, probe, cfg);
    const auto rir = estimate_rir_dual_channel(
        rec.channels[static_cast<std::size_t>(cfg.geom.reference_index)], probe, spec.welch);
    const auto base = peak_pick(rir, cfg.toa);

    TrialRecord r;
    r.value = spec.values[v];
    r.trial = t;
    r.noise_seed = noise.seed;
    r.snls_tau = est.toa.tau;
    r.snls_azimuth = est.srp.best.azimuth;
    r.baseline_tau = base.tau;
    r.snls_toa_ok = toa_hit(cell.echoes, est.toa.tau, spec.tolerance.toa_samples, &r.true_tau);
    r.baseline_toa_ok = toa_hit(cell.echoes, base.tau, spec.tolerance.toa_samples, nullptr);
    double best = std::numbers::pi * 2.0;
    for (const auto& e : cell.echoes) {
      const double d = angle_distance(e.azimuth, est.srp.best.azimuth);
      if (d < best) {
        best = d;
        r.true_azimuth = e.azimuth;
      }
    }
    r.snls_doa_ok = best <= doa_tol + 1e-9;
    res.records[task] = r;
  });

  AccuracyCurve& curve = res.curve;
  curve.variable = spec.variable;
  curve.values = spec.values;
  MethodCurve snls{"snls", {}, {}};
  MethodCurve base{"baseline", {}, {}};
  for (std::size_t v = 0; v < cells.size(); ++v) {
    std::size_t toa = 0, doa = 0, btoa = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& r = res.records[v * trials + t];
      toa += r.snls_toa_ok;
      doa += r.snls_doa_ok;
      btoa += r.baseline_toa_ok;
    }
    const auto n = static_cast<double>(trials);
    curve.trials.push_back(spec.trials);
    snls.toa_accuracy.push_back(static_cast<double>(toa) / n);
    snls.doa_accuracy.push_back(static_cast<double>(doa) / n);
    base.toa_accuracy.push_back(static_cast<double>(btoa) / n);
  }
  curve.methods = {snls, base};
  return res;
}

SweepResult run_snr_sweep(ExperimentSpec spec, int jobs) {
  spec.variable = SweepVariable::SnrDb;
  return run_sweep(spec, jobs);
}

SweepResult run_t60_sweep(ExperimentSpec spec, int jobs) {
  spec.variable = SweepVariable::T60;
  return run_sweep(spec, jobs);
}

double binomial_stderr(double p, int n) {
  if (n <= 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

std::string machine_descriptor() {
  std::string cpu = "unknown cpu";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto pos = line.find(':');
      if (pos != std::string::npos) cpu = line.substr(pos + 2);
      break;
    }
  }
  return cpu + ", " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads";
}

TimingReport time_methods(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("experiment.trials: must be >= 1");
  spec.room.validate();
  spec.pipeline.validate(spec.probe_total_len);
  const auto& cfg = spec.pipeline;
  const auto probe = generate_probe(spec.probe_active_len, spec.probe_total_len,
                                    cfg.geom.sample_rate, spec.probe_seed);
  RoomSpec room = spec.room;
  NoiseModel noise = spec.noise;
  const double value = spec.values.empty() ? noise.snr_db : spec.values.front();
  if (!spec.values.empty()) {
    if (spec.variable == SweepVariable::SnrDb) noise.snr_db = value;
    else room.t60 = value;
  }
  const auto rirs = pose_rirs(spec.pose, room, cfg);
  const auto ref = static_cast<std::size_t>(cfg.geom.reference_index);

  using clock = std::chrono::steady_clock;
  double snls = 0.0, base = 0.0;
  for (int t = 0; t < spec.trials; ++t) {
    noise.seed = trial_seed(spec.seed, value, t);
    const auto rec = observe(rirs, probe, noise, cfg);
    const auto t0 = clock::now();
    const auto est = estimate_echo(rec, probe, cfg);
    const auto t1 = clock::now();
    const auto rir = estimate_rir_dual_channel(rec.channels[ref], probe, spec.welch);
    const auto pick = peak_pick(rir, cfg.toa);
    const auto t2 = clock::now();
    (void)est;
    (void)pick;
    snls += std::chrono::duration<double>(t1 - t0).count();
    base += std::chrono::duration<double>(t2 - t1).count();
  }
  TimingReport rep;
  rep.machine = machine_descriptor();
  rep.trials = spec.trials;
  rep.snls_mean_s = snls / spec.trials;
  rep.baseline_mean_s = base / spec.trials;
  return rep;
}

}  // namespace echomap
