// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/doa.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>

namespace echomap {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::vector<double> hann_symmetric(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1));
  return w;
}

StftFrames stft(const MultichannelRecording& rec, std::size_t frame_len, std::size_t hop) {
  rec.validate();
  if (frame_len < 2) throw std::invalid_argument("stft: frame_len must be >= 2");
  if (hop == 0 || 2 * hop != frame_len)
    throw std::invalid_argument("stft: hop must equal frame_len / 2");
  if (rec.length() < frame_len) throw std::invalid_argument("stft: recording shorter than a frame");

  StftFrames f;
  f.frame_len = frame_len;
  f.hop = hop;
  f.sample_rate = rec.sample_rate;
  f.channel_count = rec.channel_count();
  f.frame_count = (rec.length() - frame_len) / hop + 1;
  f.window = hann_symmetric(frame_len);
  f.data.assign(f.frame_count * f.channel_count * f.bin_count(), cplx{});

  std::vector<cplx> buf(frame_len);
  for (std::size_t t = 0; t < f.frame_count; ++t) {
    const std::size_t start = t * hop;
    for (std::size_t m = 0; m < f.channel_count; ++m) {
      const auto& x = rec.channels[m];
      for (std::size_t i = 0; i < frame_len; ++i) buf[i] = f.window[i] * x[start + i];
      const auto spec = fft(buf);
      for (std::size_t k = 0; k < f.bin_count(); ++k) f.at(t, m, k) = spec[k];
    }
  }
  return f;
}

MultichannelRecording istft(const StftFrames& frames, std::size_t length) {
  MultichannelRecording rec;
  rec.sample_rate = frames.sample_rate;
  rec.channels.assign(frames.channel_count, std::vector<double>(length, 0.0));
  std::vector<double> norm(length, 0.0);
  const std::size_t n = frames.frame_len;
  std::vector<cplx> full(n);
  for (std::size_t t = 0; t < frames.frame_count; ++t) {
    const std::size_t start = t * frames.hop;
    for (std::size_t m = 0; m < frames.channel_count; ++m) {
      for (std::size_t k = 0; k < frames.bin_count(); ++k) {
        full[k] = frames.at(t, m, k);
        if (k != 0 && n - k < n && n - k >= frames.bin_count()) full[n - k] = std::conj(full[k]);
      }
      const auto x = real_inverse(full);
      for (std::size_t i = 0; i < n && start + i < length; ++i)
        rec.channels[m][start + i] += frames.window[i] * x[i];
    }
    for (std::size_t i = 0; i < n && start + i < length; ++i)
      norm[start + i] += frames.window[i] * frames.window[i];
  }
  for (auto& ch : rec.channels) {
    for (std::size_t i = 0; i < length; ++i) ch[i] = norm[i] > 1e-12 ? ch[i] / norm[i] : 0.0;
  }
  return rec;
}

BinCovariance estimate_covariance(const StftFrames& frames, std::size_t first, std::size_t last) {
  last = std::min(last, frames.frame_count);
  if (first >= last) throw std::invalid_argument("estimate_covariance: no frames selected");
  const auto m = static_cast<Eigen::Index>(frames.channel_count);
  BinCovariance cov;
  cov.frame_count = last - first;
  cov.bins.assign(frames.bin_count(), Eigen::MatrixXcd::Zero(m, m));
  Eigen::VectorXcd y(m);
  for (std::size_t k = 0; k < frames.bin_count(); ++k) {
    auto& r = cov.bins[k];
    for (std::size_t t = first; t < last; ++t) {
      for (Eigen::Index i = 0; i < m; ++i) y(i) = frames.at(t, static_cast<std::size_t>(i), k);
      r.noalias() += y * y.adjoint();
    }
    r /= static_cast<double>(cov.frame_count);
  }
  return cov;
}

BinCovariance regularize(const BinCovariance& cov, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("regularize: gamma must lie in [0, 1]");
  BinCovariance out;
  out.frame_count = cov.frame_count;
  out.bins.reserve(cov.bins.size());
  for (const auto& r : cov.bins) {
    const auto m = r.rows();
    const double load = gamma * r.trace().real() / static_cast<double>(m);
    Eigen::MatrixXcd reg = (1.0 - gamma) * r;
    reg.diagonal().array() += load;
    out.bins.push_back(std::move(reg));
  }
  return out;
}

namespace {

// Hermitian LDL^T with a relative pivot check.
Eigen::LDLT<Eigen::MatrixXcd> factor_hermitian(const Eigen::MatrixXcd& cov) {
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(cov);
  const double scale = std::max(cov.cwiseAbs().maxCoeff(), 1e-300);
  const Eigen::VectorXd d = ldlt.vectorD().real();
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= 1e-13 * scale)
    throw NumericalError("MPDR: covariance matrix is singular; apply regularization");
  return ldlt;
}

}  // namespace

Eigen::VectorXcd mpdr_weights(const Eigen::MatrixXcd& cov, const Eigen::VectorXcd& steer) {
  if (cov.rows() != cov.cols() || cov.rows() != steer.size())
    throw std::invalid_argument("mpdr_weights: dimension mismatch");
  const auto ldlt = factor_hermitian(cov);
  const Eigen::VectorXcd rinv_d = ldlt.solve(steer);
  const cplx denom = steer.dot(rinv_d);  // d^H R^{-1} d
  return rinv_d / denom.real();
}

void BeamGrid::validate(double sample_rate) const {
  if (!(azimuth_step > 0.0)) throw std::invalid_argument("beam.azimuth_step: must be > 0");
  const double count = kTwoPi / azimuth_step;
  if (std::abs(count - std::round(count)) > 1e-6)
    throw std::invalid_argument("beam.azimuth_step: must divide 2*pi");
  if (!(band_low_hz >= 0.0) || !(band_high_hz > band_low_hz) || band_high_hz > 0.5 * sample_rate)
    throw std::invalid_argument("beam.band: must satisfy 0 <= low < high <= Nyquist");
}

std::vector<double> BeamGrid::azimuths() const {
  const auto count = static_cast<std::size_t>(std::llround(kTwoPi / azimuth_step));
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = -std::numbers::pi + static_cast<double>(i) * azimuth_step;
  return out;
}

SrpResult srp_scan(const BinCovariance& cov, const ArrayGeometry& geom, const BeamGrid& grid,
                   std::size_t frame_len) {
  geom.validate();
  grid.validate(geom.sample_rate);
  if (cov.bins.empty()) throw std::invalid_argument("srp_scan: empty covariance");

  std::vector<std::size_t> band;
  for (std::size_t k = 0; k < cov.bins.size(); ++k) {
    const double f = static_cast<double>(k) * geom.sample_rate / static_cast<double>(frame_len);
    if (f >= grid.band_low_hz && f <= grid.band_high_hz) band.push_back(k);
  }
  if (band.empty()) throw std::invalid_argument("srp_scan: no bins inside the band");

  SrpResult res;
  res.azimuths = grid.azimuths();
  res.power.assign(res.azimuths.size(), 0.0);

  const auto m = static_cast<Eigen::Index>(geom.mic_count);
  std::vector<std::vector<double>> delays(res.azimuths.size(), std::vector<double>(geom.mic_count));
  for (std::size_t a = 0; a < res.azimuths.size(); ++a) {
    for (int i = 0; i < geom.mic_count; ++i)
      delays[a][static_cast<std::size_t>(i)] = tdoa(geom, res.azimuths[a], grid.elevation, i);
  }

  Eigen::VectorXcd d(m);
  for (std::size_t k : band) {
    if (cov.bins[k].rows() != m) throw std::invalid_argument("srp_scan: channel count mismatch");
    const auto ldlt = factor_hermitian(cov.bins[k]);
    const Eigen::VectorXd inv_d = ldlt.vectorD().real().cwiseInverse();
    const double omega = kTwoPi * static_cast<double>(k) / static_cast<double>(frame_len);
    for (std::size_t a = 0; a < res.azimuths.size(); ++a) {
      for (Eigen::Index i = 0; i < m; ++i)
        d(i) = std::polar(1.0, -omega * delays[a][static_cast<std::size_t>(i)]);
      // With R = P^T L D L^H P, d^H R^{-1} d = sum_i |(L^{-1} P d)_i|^2 / D_i,
      // and w^H R w = 1 / (d^H R^{-1} d) for the MPDR weights.
      d = ldlt.transpositionsP() * d;
      ldlt.matrixL().solveInPlace(d);
      res.power[a] += 1.0 / d.cwiseAbs2().dot(inv_d);
    }
  }

  std::size_t best = 0;
  for (std::size_t a = 1; a < res.power.size(); ++a) {
    if (res.power[a] > res.power[best]) best = a;
  }
  res.best = {res.azimuths[best], res.power[best]};
  return res;
}

void DoaConfig::validate(double sample_rate) const {
  if (frame_len < 2 || 2 * hop != frame_len)
    throw std::invalid_argument("beam.frame_len/hop: hop must equal frame_len / 2");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("beam.gamma: must lie in [0, 1]");
  grid.validate(sample_rate);
}

std::pair<std::size_t, std::size_t> frames_overlapping(const StftFrames& frames, double begin,
                                                       std::size_t length) {
  const double end = begin + static_cast<double>(length);
  std::size_t first = frames.frame_count;
  std::size_t last = 0;
  for (std::size_t t = 0; t < frames.frame_count; ++t) {
    const double fs = static_cast<double>(t * frames.hop);
    const double fe = fs + static_cast<double>(frames.frame_len);
    if (fe > begin && fs < end) {
      first = std::min(first, t);
      last = t + 1;
    }
  }
  if (first >= last) {
    first = frames.frame_count - 1;
    last = frames.frame_count;
  }
  return {first, last};
}

SrpResult estimate_doa(const MultichannelRecording& rec, const ArrayGeometry& geom, double tau,
                       std::size_t segment_len, const DoaConfig& cfg) {
  cfg.validate(geom.sample_rate);
  const auto frames = stft(rec, cfg.frame_len, cfg.hop);
  const auto [first, last] = frames_overlapping(frames, tau, segment_len);
  const auto cov = regularize(estimate_covariance(frames, first, last), cfg.gamma);
  return srp_scan(cov, geom, cfg.grid, cfg.frame_len);
}

}  // namespace echomap
