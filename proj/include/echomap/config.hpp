// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include "echomap/eval.hpp"
#include "echomap/io.hpp"
#include "echomap/mapper.hpp"
#include "echomap/pipeline.hpp"
#include "echomap/training.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace echomap {

// Invalid scenario description. what() starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kConfigVersion = 1;

struct ProbeConfig {
  std::size_t active_len = 1500;
  std::size_t total_len = 20000;
  std::uint64_t seed = 1;
};

struct TrainConfig {
  DatasetConfig dataset;
  double train_ratio = 0.8;
  int folds = 5;
  std::vector<double> c_grid{0.1, 1.0, 10.0, 100.0};
  std::vector<double> width_grid{0.01, 0.1, 1.0, 10.0};
};

struct MapConfig {
  RoomSpec room{8.0, 6.0, 5.0};
  std::vector<Pose> poses;  // explicit trajectory; empty selects the wall-following generator
  std::vector<double> margins{1.5, 2.4};
  double spacing = 0.5;
  double tolerance_m = 0.3;

  Trajectory trajectory() const;
};

struct ExperimentConfig {
  std::vector<double> snr_values{-20.0, -10.0, 0.0, 10.0, 20.0, 30.0, 40.0};
  std::vector<double> t60_values{0.2, 0.4, 0.6, 0.8, 1.0};
  int trials = 50;
  double fixed_snr_db = 10.0;
  AccuracyTolerance tolerance;
};

/// Full declarative run description.
struct ScenarioConfig {
  int version = kConfigVersion;
  std::uint64_t seed = 0;
  RoomSpec room;
  Pose pose{8.5, 4.0, 0.0};
  ProbeConfig probe;
  NoiseModel noise;
  PipelineConfig pipeline;
  WelchConfig welch;
  TrainConfig classifier;
  MapConfig map;
  ExperimentConfig experiment;

  ScenarioConfig();

  ProbeSignal probe_signal() const;
  // Noise models and protocols with per-purpose seeds derived from `seed`.
  NoiseModel sim_noise() const;
  NoiseModel map_noise() const;
  TrainingProtocol training_protocol() const;
  ExperimentSpec experiment_spec(SweepVariable variable) const;
  // Cross-field checks; throws ConfigError.
  void validate() const;
};

// Strict parse: unknown fields, wrong types and inconsistent values raise ConfigError.
ScenarioConfig parse_config(const Json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);

// Normalized form of a parsed config, used in run manifests.
Json to_json(const ScenarioConfig& cfg);

}  // namespace echomap
