// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include "echomap/classifier.hpp"
#include "echomap/pipeline.hpp"

#include <cstdint>
#include <vector>

namespace echomap {

struct TrainingProtocol {
  DatasetConfig dataset;
  double train_ratio = 0.8;
  int folds = 5;
  std::vector<double> c_grid{0.1, 1.0, 10.0, 100.0};
  std::vector<double> width_grid{0.01, 0.1, 1.0, 10.0};
  std::uint64_t split_seed = 0;
  std::uint64_t cv_seed = 0;
};

struct TrainingOutcome {
  std::vector<LabeledSample> dataset;
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> test;
  CvResult cv;
  SvmModel model;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

// Dataset generation, seeded split, grid-search cross-validation, then a final
// fit on the whole training split with the selected hyperparameters.
TrainingOutcome run_training(const TrainingProtocol& protocol, const ProbeSignal& probe,
                             const PipelineConfig& cfg, int jobs = 1);

// Same protocol on an already generated dataset.
TrainingOutcome fit_dataset(std::vector<LabeledSample> dataset, const TrainingProtocol& protocol,
                            int jobs = 1);

}  // namespace echomap
