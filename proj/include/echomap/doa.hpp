// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include "echomap/fft.hpp"
#include "echomap/geometry.hpp"
#include "echomap/room_sim.hpp"

#include <Eigen/Dense>

#include <numbers>
#include <stdexcept>
#include <vector>

namespace echomap {

class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Symmetric Hann window of n points (zero at both ends).
std::vector<double> hann_symmetric(std::size_t n);

/// One-sided STFT of every channel. Bin k covers frequency k * fs / frame_len.
struct StftFrames {
  std::size_t frame_count = 0;
  std::size_t channel_count = 0;
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  double sample_rate = 0.0;
  std::vector<double> window;
  std::vector<cplx> data;  // [frame][channel][bin]

  std::size_t bin_count() const { return frame_len / 2 + 1; }
  cplx& at(std::size_t t, std::size_t m, std::size_t k) {
    return data[(t * channel_count + m) * bin_count() + k];
  }
  const cplx& at(std::size_t t, std::size_t m, std::size_t k) const {
    return data[(t * channel_count + m) * bin_count() + k];
  }
};

// Hann-windowed frames with hop = frame_len / 2; only complete frames are kept.
StftFrames stft(const MultichannelRecording& rec, std::size_t frame_len, std::size_t hop);

// Weighted overlap-add inverse normalized by the summed squared window.
MultichannelRecording istft(const StftFrames& frames, std::size_t length);

struct BinCovariance {
  std::vector<Eigen::MatrixXcd> bins;
  std::size_t frame_count = 0;
};

// R_y(k) = 1/T sum_t Y(t,k) Y(t,k)^H over frames [first, last).
BinCovariance estimate_covariance(const StftFrames& frames, std::size_t first = 0,
                                  std::size_t last = static_cast<std::size_t>(-1));

// (1 - gamma) R + gamma Tr{R}/M I per bin.
BinCovariance regularize(const BinCovariance& cov, double gamma);

// R^{-1} d / (d^H R^{-1} d) via a Hermitian LDL^T solve. Throws NumericalError if R is singular.
Eigen::VectorXcd mpdr_weights(const Eigen::MatrixXcd& cov, const Eigen::VectorXcd& steer);

struct BeamGrid {
  double azimuth_step = std::numbers::pi / 180.0;
  double elevation = std::numbers::pi / 2.0;
  double band_low_hz = 300.0;
  double band_high_hz = 8000.0;

  void validate(double sample_rate) const;
  std::vector<double> azimuths() const;  // ascending from -pi
};

struct DoaEstimate {
  double azimuth = 0.0;  // radians in [-pi, pi), array frame
  double power = 0.0;
};

struct SrpResult {
  DoaEstimate best;
  std::vector<double> azimuths;
  std::vector<double> power;
};

// Broadband steered response power of the MPDR beamformer summed over the band.
SrpResult srp_scan(const BinCovariance& cov, const ArrayGeometry& geom, const BeamGrid& grid,
                   std::size_t frame_len);

struct DoaConfig {
  std::size_t frame_len = 882;
  std::size_t hop = 441;
  double gamma = 0.1;
  BeamGrid grid;

  void validate(double sample_rate) const;
};

// Frames [first, last) overlapping samples [begin, begin + length).
std::pair<std::size_t, std::size_t> frames_overlapping(const StftFrames& frames, double begin,
                                                       std::size_t length);

// STFT, covariance over the echo-bearing frames starting at tau, regularization and SRP scan.
SrpResult estimate_doa(const MultichannelRecording& rec, const ArrayGeometry& geom, double tau,
                       std::size_t segment_len, const DoaConfig& cfg);

}  // namespace echomap
