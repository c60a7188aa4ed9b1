// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace echomap {

struct EchoFeature {
  double toa_delay = 0.0;   // samples
  double beam_power = 0.0;  // peak steered response power
};

enum class EchoClass { Wall = 0, NoWall = 1 };

std::string to_string(EchoClass c);

struct LabeledSample {
  EchoFeature feature;
  EchoClass label = EchoClass::NoWall;
  double true_toa = 0.0;
};

// Wall if the estimate lies strictly closer than max_error samples to the true delay.
inline constexpr double kLabelToleranceSamples = 10.0;
EchoClass label_for(double estimated_toa, double true_toa,
                    double max_error = kLabelToleranceSamples);

/// RBF support-vector classifier over z-scored (delay, power-in-dB) features.
///
/// Wall maps to +1 internally. decision(x) = sum_i dual_coeffs[i] K(sv_i, z(x)) + bias with
/// K(a, b) = exp(-rbf_width * |a - b|^2); a zero decision value is reported as Wall.
struct SvmModel {
  std::vector<std::array<double, 2>> support_vectors;
  std::vector<double> dual_coeffs;  // alpha_i * y_i
  double bias = 0.0;
  double rbf_width = 1.0;
  double box_c = 1.0;
  std::array<double, 2> feat_mean{0.0, 0.0};
  std::array<double, 2> feat_std{1.0, 1.0};

  std::array<double, 2> normalize(const EchoFeature& f) const;
  double decision(const EchoFeature& f) const;
};

// Raw model inputs: the delay and 10 log10 of the beam power.
std::array<double, 2> feature_vector(const EchoFeature& f);

struct Prediction {
  EchoClass label = EchoClass::Wall;
  double decision = 0.0;
};

Prediction predict(const SvmModel& model, const EchoFeature& feature);

struct SvmTrainOptions {
  double tolerance = 1e-3;      // KKT violation gap m(alpha) - M(alpha)
  std::size_t max_iterations = 10'000'000;
};

struct SvmTrainReport {
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> alphas;  // per training sample, same order as the input
};

// SMO training with maximal-violating-pair working-set selection.
SvmModel train_svm(const std::vector<LabeledSample>& train, double box_c, double rbf_width,
                   const SvmTrainOptions& options = {}, SvmTrainReport* report = nullptr);

double accuracy(const SvmModel& model, const std::vector<LabeledSample>& samples);

std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split_dataset(
    const std::vector<LabeledSample>& samples, double ratio, std::uint64_t seed);

struct CvCell {
  double box_c = 0.0;
  double rbf_width = 0.0;
  double accuracy = 0.0;
};

struct CvResult {
  double best_c = 0.0;
  double best_width = 0.0;
  double cv_accuracy = 0.0;
  std::vector<CvCell> cells;
};

// Stratified k-fold indices; fold sizes differ by at most one per class.
std::vector<int> stratified_folds(const std::vector<LabeledSample>& samples, int folds,
                                  std::uint64_t seed);

CvResult cross_validate(const std::vector<LabeledSample>& train, std::vector<double> c_grid,
                        std::vector<double> width_grid, int folds, std::uint64_t seed = 0,
                        int jobs = 1);

}  // namespace echomap
