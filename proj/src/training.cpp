// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/training.hpp"

namespace echomap {

TrainingOutcome fit_dataset(std::vector<LabeledSample> dataset, const TrainingProtocol& protocol,
                            int jobs) {
  TrainingOutcome out;
  out.dataset = std::move(dataset);
  auto [train, test] = split_dataset(out.dataset, protocol.train_ratio, protocol.split_seed);
  out.train = std::move(train);
  out.test = std::move(test);
  out.cv = cross_validate(out.train, protocol.c_grid, protocol.width_grid, protocol.folds,
                          protocol.cv_seed, jobs);
  out.model = train_svm(out.train, out.cv.best_c, out.cv.best_width);
  out.train_accuracy = accuracy(out.model, out.train);
  out.test_accuracy = accuracy(out.model, out.test);
  return out;
}

TrainingOutcome run_training(const TrainingProtocol& protocol, const ProbeSignal& probe,
                             const PipelineConfig& cfg, int jobs) {
  return fit_dataset(generate_dataset(protocol.dataset, probe, cfg, jobs), protocol, jobs);
}

}  // namespace echomap
