// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/classifier.hpp"

#include "echomap/geometry.hpp"
#include "echomap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace echomap {

namespace {

constexpr double kTau = 1e-12;      // floor for a non-positive curvature in the pair update
constexpr double kPowerFloor = 1e-300;

double rbf(const std::array<double, 2>& a, const std::array<double, 2>& b, double width) {
  const double d0 = a[0] - b[0];
  const double d1 = a[1] - b[1];
  return std::exp(-width * (d0 * d0 + d1 * d1));
}

double sign_of(EchoClass c) { return c == EchoClass::Wall ? 1.0 : -1.0; }

}  // namespace

std::string to_string(EchoClass c) { return c == EchoClass::Wall ? "wall" : "no_wall"; }

EchoClass label_for(double estimated_toa, double true_toa, double max_error) {
  return std::abs(estimated_toa - true_toa) < max_error ? EchoClass::Wall : EchoClass::NoWall;
}

std::array<double, 2> feature_vector(const EchoFeature& f) {
  return {f.toa_delay, 10.0 * std::log10(std::max(f.beam_power, kPowerFloor))};
}

std::array<double, 2> SvmModel::normalize(const EchoFeature& f) const {
  const auto v = feature_vector(f);
  return {(v[0] - feat_mean[0]) / feat_std[0], (v[1] - feat_mean[1]) / feat_std[1]};
}

double SvmModel::decision(const EchoFeature& f) const {
  const auto z = normalize(f);
  double acc = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i)
    acc += dual_coeffs[i] * rbf(support_vectors[i], z, rbf_width);
  return acc;
}

Prediction predict(const SvmModel& model, const EchoFeature& feature) {
  const double d = model.decision(feature);
  return {d >= 0.0 ? EchoClass::Wall : EchoClass::NoWall, d};
}

SvmModel train_svm(const std::vector<LabeledSample>& train, double box_c, double rbf_width,
                   const SvmTrainOptions& options, SvmTrainReport* report) {
  if (!(box_c > 0.0)) throw std::invalid_argument("train_svm: C must be > 0");
  if (!(rbf_width > 0.0)) throw std::invalid_argument("train_svm: RBF width must be > 0");
  const std::size_t n = train.size();
  const auto walls = static_cast<std::size_t>(std::count_if(
      train.begin(), train.end(), [](const LabeledSample& s) { return s.label == EchoClass::Wall; }));
  if (walls == 0 || walls == n) throw std::invalid_argument("train_svm: both classes must be present");

  SvmModel model;
  model.box_c = box_c;
  model.rbf_width = rbf_width;

  std::vector<std::array<double, 2>> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = feature_vector(train[i].feature);
  for (int d = 0; d < 2; ++d) {
    double mean = 0.0;
    for (const auto& v : raw) mean += v[static_cast<std::size_t>(d)];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& v : raw) var += (v[static_cast<std::size_t>(d)] - mean) * (v[static_cast<std::size_t>(d)] - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    model.feat_mean[static_cast<std::size_t>(d)] = mean;
    model.feat_std[static_cast<std::size_t>(d)] = sd > 0.0 ? sd : 1.0;
  }
  std::vector<std::array<double, 2>> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = model.normalize(train[i].feature);

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = sign_of(train[i].label);

  // Q_ij = y_i y_j K_ij
  std::vector<double> q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = y[i] * y[j] * rbf(x[i], x[j], rbf_width);
      q[i * n + j] = v;
      q[j * n + i] = v;
    }
  }

  const double c = box_c;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  auto is_upper = [&](std::size_t t) { return alpha[t] >= c; };
  auto is_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  std::size_t iter = 0;
  bool converged = false;
  for (; iter < options.max_iterations; ++iter) {
    // Maximal violating pair: i maximizes -y_t G_t over I_up, j minimizes it over I_low.
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = n;
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      const bool in_up = y[t] > 0 ? !is_upper(t) : !is_lower(t);
      const bool in_low = y[t] > 0 ? !is_lower(t) : !is_upper(t);
      if (in_up && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    if (i == n || j == n || g_max - g_min < options.tolerance) {
      converged = true;
      break;
    }

    const double* qi = &q[i * n];
    const double* qj = &q[j * n];
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = 2.0 + 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * dai + qj[t] * daj;
  }

  // rho from free variables, or the midpoint of the feasible interval if none are free.
  double sum_free = 0.0;
  std::size_t n_free = 0;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (is_upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (is_lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
  model.bias = -rho;

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      model.support_vectors.push_back(x[t]);
      model.dual_coeffs.push_back(alpha[t] * y[t]);
    }
  }
  if (report != nullptr) {
    report->iterations = iter;
    report->converged = converged;
    report->alphas = alpha;
  }
  return model;
}

double accuracy(const SvmModel& model, const std::vector<LabeledSample>& samples) {
  if (samples.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& s : samples) {
    if (predict(model, s.feature).label == s.label) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(samples.size());
}

std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split_dataset(
    const std::vector<LabeledSample>& samples, double ratio, std::uint64_t seed) {
  if (samples.empty()) throw std::invalid_argument("split_dataset: empty input");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("split_dataset: ratio must be in (0, 1)");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(samples.size())));
  std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> out;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_train ? out.first : out.second).push_back(samples[order[i]]);
  return out;
}

std::vector<int> stratified_folds(const std::vector<LabeledSample>& samples, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
  std::vector<std::size_t> walls, others;
  for (std::size_t i = 0; i < samples.size(); ++i)
    (samples[i].label == EchoClass::Wall ? walls : others).push_back(i);
  if (walls.size() < static_cast<std::size_t>(folds) || others.size() < static_cast<std::size_t>(folds))
    throw std::invalid_argument("cross_validate: fold count exceeds class size");
  std::mt19937_64 rng(seed);
  std::shuffle(walls.begin(), walls.end(), rng);
  std::shuffle(others.begin(), others.end(), rng);
  std::vector<int> fold(samples.size(), 0);
  std::size_t k = 0;
  for (const auto* group : {&walls, &others}) {
    for (std::size_t idx : *group) fold[idx] = static_cast<int>(k++ % static_cast<std::size_t>(folds));
  }
  return fold;
}

CvResult cross_validate(const std::vector<LabeledSample>& train, std::vector<double> c_grid,
                        std::vector<double> width_grid, int folds, std::uint64_t seed, int jobs) {
  if (c_grid.empty() || width_grid.empty())
    throw std::invalid_argument("cross_validate: hyperparameter grids must be nonempty");
  std::sort(c_grid.begin(), c_grid.end());
  std::sort(width_grid.begin(), width_grid.end());
  const auto fold = stratified_folds(train, folds, seed);

  const std::size_t cells = c_grid.size() * width_grid.size();
  const auto nf = static_cast<std::size_t>(folds);
  std::vector<double> fold_acc(cells * nf, 0.0);
  parallel_for(cells * nf, jobs, [&](std::size_t task) {
    const std::size_t cell = task / nf;
    const int f = static_cast<int>(task % nf);
    std::vector<LabeledSample> tr, te;
    for (std::size_t i = 0; i < train.size(); ++i) (fold[i] == f ? te : tr).push_back(train[i]);
    const auto model = train_svm(tr, c_grid[cell / width_grid.size()], width_grid[cell % width_grid.size()]);
    fold_acc[task] = accuracy(model, te);
  });

  CvResult res;
  res.cv_accuracy = -1.0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    double acc = 0.0;
    for (std::size_t f = 0; f < nf; ++f) acc += fold_acc[cell * nf + f];
    acc /= static_cast<double>(nf);
    CvCell entry{c_grid[cell / width_grid.size()], width_grid[cell % width_grid.size()], acc};
    res.cells.push_back(entry);
    if (acc > res.cv_accuracy) {
      res.cv_accuracy = acc;
      res.best_c = entry.box_c;
      res.best_width = entry.rbf_width;
    }
  }
  return res;
}

}  // namespace echomap
