// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/room_sim.hpp"

#include "echomap/fft.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace echomap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSabineConstant = 0.161;
constexpr std::size_t kMinDiffuseLength = 256;

struct AxisImage {
  double offset;  // image coordinate minus receiver coordinate
  int order;      // wall bounces along this axis
};

// Every image coordinate along one axis whose offset stays within max_dist.
std::vector<AxisImage> axis_images(double extent, double src, double rcv, double max_dist) {
  std::vector<AxisImage> out;
  const int n = static_cast<int>(std::ceil(max_dist / (2.0 * extent))) + 1;
  for (int m = -n; m <= n; ++m) {
    for (int q = 0; q <= 1; ++q) {
      const double image = (1 - 2 * q) * src + 2.0 * m * extent;
      const double offset = image - rcv;
      if (std::abs(offset) > max_dist) continue;
      out.push_back({offset, std::abs(m - q) + std::abs(m)});
    }
  }
  return out;
}

double eyring_alpha(const RoomSpec& room, double t60) {
  return -std::expm1(-kSabineConstant * room.volume() / (room.surface() * t60));
}

// Image-source impulse response at the reference placement, 1.2 * T60 long,
// stored per sample as a polynomial in the reflection coefficient. Arrivals
// that share a sample add in amplitude, as they do in simulate_rir. Each
// sample keeps only the window of orders that actually reach it.
class DecayModel {
public:
  DecayModel(const RoomSpec& room, double t60) : fs_(room.sample_rate) {
    const double c = room.speed_of_sound;
    const auto samples = static_cast<std::size_t>(1.2 * t60 * fs_);
    const double max_dist = static_cast<double>(samples) * c / fs_;
    const auto ix = axis_images(room.length, 0.35 * room.length, 0.70 * room.length, max_dist);
    const auto iy = axis_images(room.width, 0.40 * room.width, 0.65 * room.width, max_dist);
    const auto iz = axis_images(room.height, 0.45 * room.height, 0.35 * room.height, max_dist);
    const double max_d2 = max_dist * max_dist;
    auto for_each_image = [&](auto&& visit) {
      for (const auto& ax : ix) {
        for (const auto& ay : iy) {
          const double dxy2 = ax.offset * ax.offset + ay.offset * ay.offset;
          if (dxy2 > max_d2) continue;
          for (const auto& az : iz) {
            const double d2 = dxy2 + az.offset * az.offset;
            if (d2 > max_d2) continue;
            const double d = std::sqrt(d2);
            const auto n = static_cast<std::size_t>(std::lround(d * fs_ / c));
            if (n < samples) visit(n, ax.order + ay.order + az.order, d);
          }
        }
      }
    };

    first_order_.assign(samples, std::numeric_limits<int>::max());
    std::vector<int> last_order(samples, -1);
    for_each_image([&](std::size_t n, int order, double) {
      first_order_[n] = std::min(first_order_[n], order);
      last_order[n] = std::max(last_order[n], order);
    });
    offset_.assign(samples + 1, 0);
    for (std::size_t n = 0; n < samples; ++n) {
      const int width = last_order[n] >= 0 ? last_order[n] - first_order_[n] + 1 : 0;
      offset_[n + 1] = offset_[n] + static_cast<std::size_t>(width);
      max_order_ = std::max(max_order_, last_order[n]);
    }
    coeff_.assign(offset_.back(), 0.0);
    for_each_image([&](std::size_t n, int order, double d) {
      coeff_[offset_[n] + static_cast<std::size_t>(order - first_order_[n])] += 1.0 / (4.0 * kPi * d);
    });
  }

  // Fitted T60 for a reflection coefficient; 0 when the decay is too fast to fit.
  double t60_for(double beta) const {
    const std::size_t samples = first_order_.size();
    std::vector<double> pw(static_cast<std::size_t>(max_order_) + 1);
    pw[0] = 1.0;
    for (std::size_t o = 1; o < pw.size(); ++o) pw[o] = pw[o - 1] * beta;
    std::vector<double> edc(samples);
    double acc = 0.0;
    for (std::size_t i = samples; i-- > 0;) {
      double h = 0.0;
      for (std::size_t k = offset_[i]; k < offset_[i + 1]; ++k)
        h += coeff_[k] * pw[static_cast<std::size_t>(first_order_[i]) + (k - offset_[i])];
      acc += h * h;
      edc[i] = acc;
    }
    if (samples == 0 || !(edc[0] > 0.0)) return 0.0;
    double n = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      const double db = 10.0 * std::log10(edc[i] / edc[0]);
      if (db > -5.0 || db < -25.0) continue;
      const double t = static_cast<double>(i) / fs_;
      n += 1.0;
      st += t;
      sy += db;
      stt += t * t;
      sty += t * db;
    }
    if (n < 2.0) return 0.0;
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    return slope < 0.0 ? -60.0 / slope : 0.0;
  }

private:
  double fs_;
  int max_order_ = 0;
  std::vector<int> first_order_;
  std::vector<std::size_t> offset_;
  std::vector<double> coeff_;
};

ReflectionCoefficient calibrated_coefficient(const RoomSpec& room, double t60) {
  using Key = std::array<double, 6>;
  static std::mutex mutex;
  static std::map<Key, ReflectionCoefficient> cache;
  const Key key{room.length, room.width, room.height, t60, room.sample_rate, room.speed_of_sound};
  {
    std::lock_guard lock(mutex);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }

  const DecayModel model(room, t60);
  double lo = 1e-3;
  double hi = 1.0 - 1e-9;
  ReflectionCoefficient out;
  if (model.t60_for(lo) >= t60) {
    out = {0.0, true};
  } else {
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (model.t60_for(mid) > t60 ? hi : lo) = mid;
    }
    const double beta = 0.5 * (lo + hi);
    // A target shorter than the direct-path delay has no fittable decay at any coefficient.
    const bool reached = std::abs(model.t60_for(beta) - t60) <= 0.5 * t60;
    out = reached ? ReflectionCoefficient{beta, false} : ReflectionCoefficient{0.0, true};
  }

  std::lock_guard lock(mutex);
  if (cache.size() > 64) cache.clear();
  cache.emplace(key, out);
  return out;
}

}  // namespace

void RoomSpec::validate() const {
  if (!(length > 0.0) || !(width > 0.0) || !(height > 0.0))
    throw std::invalid_argument("room.dims: all dimensions must be > 0");
  if (!(t60 >= 0.0) || std::isnan(t60)) throw std::invalid_argument("room.t60: must be >= 0");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("room.sample_rate: must be > 0");
  if (!(speed_of_sound > 0.0)) throw std::invalid_argument("room.speed_of_sound: must be > 0");
}

bool RoomSpec::contains(const Vec3& p, double margin) const {
  return p.x > margin && p.x < length - margin && p.y > margin && p.y < width - margin &&
         p.z > margin && p.z < height - margin;
}

ReflectionCoefficient t60_to_reflection_coeff(const RoomSpec& room) {
  return t60_to_reflection_coeff(room, room.absorption);
}

ReflectionCoefficient t60_to_reflection_coeff(const RoomSpec& room, AbsorptionModel model) {
  room.validate();
  if (room.t60 <= 0.0) return {0.0, true};
  if (std::isinf(room.t60)) return {1.0, false};
  const double exponent = kSabineConstant * room.volume() / (room.surface() * room.t60);
  double alpha = 0.0;
  switch (model) {
    case AbsorptionModel::Sabine: alpha = exponent; break;
    case AbsorptionModel::Eyring: alpha = -std::expm1(-exponent); break;
    case AbsorptionModel::Calibrated: {
      if (room.t60 <= kMaxCalibratedT60) return calibrated_coefficient(room, room.t60);
      const auto at_limit = calibrated_coefficient(room, kMaxCalibratedT60);
      const double ratio = std::log(at_limit.value) / (0.5 * std::log1p(-eyring_alpha(room, kMaxCalibratedT60)));
      const double log_beta = ratio * 0.5 * std::log1p(-eyring_alpha(room, room.t60));
      return {std::min(std::exp(log_beta), std::nextafter(1.0, 0.0)), false};
    }
  }
  if (alpha >= 1.0) return {0.0, true};
  // sqrt(1 - alpha) < 1 for any finite T60, so the upper clamp only guards rounding.
  return {std::clamp(std::sqrt(1.0 - alpha), 0.0, std::nextafter(1.0, 0.0)), false};
}

DelayTaps fractional_delay_taps(double delay_samples) {
  DelayTaps t;
  const double base = std::floor(delay_samples);
  const double f = delay_samples - base;
  t.start = static_cast<long>(base) - 1;
  if (f == 0.0) {
    t.weights = {0.0, 1.0, 0.0, 0.0};
    return t;
  }
  t.weights[0] = -f * (f - 1.0) * (f - 2.0) / 6.0;
  t.weights[1] = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
  t.weights[2] = -(f + 1.0) * f * (f - 2.0) / 2.0;
  t.weights[3] = (f + 1.0) * f * (f - 1.0) / 6.0;
  return t;
}

RirSet simulate_rir(const RoomSpec& room, const Vec3& source, const std::vector<Vec3>& mics,
                    std::size_t length, int max_order) {
  room.validate();
  if (length == 0) throw std::invalid_argument("simulate_rir: zero-length response requested");
  if (!room.contains(source)) throw std::invalid_argument("simulate_rir: source outside room");
  for (std::size_t m = 0; m < mics.size(); ++m) {
    if (!room.contains(mics[m]))
      throw std::invalid_argument("simulate_rir: microphone " + std::to_string(m) +
                                  " outside room");
  }

  const auto refl = t60_to_reflection_coeff(room);
  const double beta = refl.anechoic ? 0.0 : refl.value;
  const double fs = room.sample_rate;
  const double c = room.speed_of_sound;
  const double max_dist = (static_cast<double>(length) + 2.0) * c / fs;

  RirSet set;
  set.sample_rate = fs;
  set.max_order = max_order;
  set.responses.assign(mics.size(), std::vector<double>(length, 0.0));

  for (std::size_t m = 0; m < mics.size(); ++m) {
    const auto ix = axis_images(room.length, source.x, mics[m].x, max_dist);
    const auto iy = axis_images(room.width, source.y, mics[m].y, max_dist);
    const auto iz = axis_images(room.height, source.z, mics[m].z, max_dist);
    int max_total = 0;
    for (const auto& a : ix) max_total = std::max(max_total, a.order);
    int max_y = 0, max_z = 0;
    for (const auto& a : iy) max_y = std::max(max_y, a.order);
    for (const auto& a : iz) max_z = std::max(max_z, a.order);
    max_total += max_y + max_z;
    std::vector<double> beta_pow(static_cast<std::size_t>(max_total) + 1);
    for (int k = 0; k <= max_total; ++k) beta_pow[static_cast<std::size_t>(k)] = std::pow(beta, k);

    auto& h = set.responses[m];
    const double max_d2 = max_dist * max_dist;
    for (const auto& ax : ix) {
      const double dx2 = ax.offset * ax.offset;
      if (dx2 > max_d2) continue;
      for (const auto& ay : iy) {
        const double dxy2 = dx2 + ay.offset * ay.offset;
        if (dxy2 > max_d2) continue;
        for (const auto& az : iz) {
          const double d2 = dxy2 + az.offset * az.offset;
          if (d2 > max_d2) continue;
          const int order = ax.order + ay.order + az.order;
          if (max_order >= 0 && order > max_order) continue;
          const double g = beta_pow[static_cast<std::size_t>(order)];
          if (g == 0.0) continue;
          const double d = std::sqrt(d2);
          const double gain = g / (4.0 * kPi * d);
          const auto taps = fractional_delay_taps(d * fs / c);
          for (int i = 0; i < 4; ++i) {
            const long n = taps.start + i;
            if (n < 0 || n >= static_cast<long>(length) || taps.weights[static_cast<std::size_t>(i)] == 0.0)
              continue;
            h[static_cast<std::size_t>(n)] += gain * taps.weights[static_cast<std::size_t>(i)];
          }
        }
      }
    }
  }
  return set;
}

void NoiseModel::validate() const {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
    throw std::invalid_argument("noise.snr_db: must be finite or +inf");
  if (std::isnan(sdnr_db) || sdnr_db == -std::numeric_limits<double>::infinity())
    throw std::invalid_argument("noise.sdnr_db: must be finite or +inf");
  if (!(rotor_rps > 0.0)) throw std::invalid_argument("noise.rotor_rps: must be > 0");
}

void MultichannelRecording::validate() const {
  if (channels.empty()) throw std::invalid_argument("recording: no channels");
  const auto n = channels.front().size();
  for (const auto& ch : channels) {
    if (ch.size() != n) throw std::invalid_argument("recording: unequal channel lengths");
  }
  if (!(sample_rate > 0.0)) throw std::invalid_argument("recording: sample_rate must be > 0");
}

double variance(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double acc = 0.0;
  for (double v : x) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(x.size());
}

std::vector<double> rotor_surrogate(std::size_t length, double sample_rate, double rotor_rps,
                                    std::uint64_t seed, int blade_count) {
  if (length == 0) return {};
  const std::size_t n = std::max<std::size_t>(2, next_pow2(length));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> white(n);
  for (auto& v : white) v = normal(rng);
  auto spec = real_spectrum(white, n);

  const double blade_pass = rotor_rps * blade_count;
  const double nyquist = 0.5 * sample_rate;
  constexpr double kFloorCorner = 20.0;  // Hz
  constexpr double kLineWidth = 4.0;     // Hz
  constexpr double kLineLevel = 100.0;   // first harmonic PSD relative to the floor at that frequency
  auto psd = [&](double f) {
    double p = 1.0 / std::max(f, kFloorCorner);
    for (int h = 1; h * blade_pass < nyquist; ++h) {
      const double fh = h * blade_pass;
      const double z = (f - fh) / kLineWidth;
      if (std::abs(z) > 8.0) continue;
      p += kLineLevel / (blade_pass * h) * std::exp(-0.5 * z * z);
    }
    return p;
  };
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n);
    const double a = std::sqrt(psd(f));
    spec[k] *= a;
    if (k != 0 && k != n / 2) spec[n - k] *= a;
  }
  auto out = real_inverse(spec);
  out.resize(length);
  const double v = variance(out);
  if (v > 0.0) {
    const double s = 1.0 / std::sqrt(v);
    for (auto& x : out) x *= s;
  }
  return out;
}

double diffuse_coherence(double frequency_hz, double distance_m, double speed_of_sound) {
  const double arg = 2.0 * kPi * frequency_hz * distance_m / speed_of_sound;
  return std::cyl_bessel_j(0.0, arg);
}

namespace {

using MixingSet = std::vector<Eigen::MatrixXd>;

// Per-bin mixing matrices A with A A^T = Gamma(f). They depend only on the
// array layout and the transform length, so they are shared across calls.
// The eigen factor tolerates the rank-deficient low-frequency coherence
// matrices where a Cholesky factorization breaks down.
std::shared_ptr<const MixingSet> coherence_factors(const Eigen::MatrixXd& dist, double sample_rate,
                                                   double speed_of_sound, std::size_t n) {
  static std::mutex mutex;
  static std::map<std::vector<double>, std::shared_ptr<const MixingSet>> cache;
  std::vector<double> key{static_cast<double>(n), sample_rate, speed_of_sound};
  key.insert(key.end(), dist.data(), dist.data() + dist.size());
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const auto m_count = dist.rows();
  auto set = std::make_shared<MixingSet>();
  set->reserve(n / 2 + 1);
  Eigen::MatrixXd gamma(m_count, m_count);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n);
    for (Eigen::Index i = 0; i < m_count; ++i) {
      for (Eigen::Index j = 0; j < m_count; ++j)
        gamma(i, j) = i == j ? 1.0 : diffuse_coherence(f, dist(i, j), speed_of_sound);
    }
    eig.compute(gamma);
    const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    set->push_back(eig.eigenvectors() * lambda.asDiagonal());
  }
  std::lock_guard<std::mutex> lock(mutex);
  if (cache.size() > 16) cache.clear();
  return cache.emplace(std::move(key), std::move(set)).first->second;
}

}  // namespace

MultichannelRecording diffuse_noise(const std::vector<Vec3>& mics, double sample_rate,
                                    double speed_of_sound, std::size_t length, double rotor_rps,
                                    std::uint64_t seed) {
  if (mics.empty()) throw std::invalid_argument("diffuse_noise: no microphones");
  if (length <= kMinDiffuseLength)
    throw std::invalid_argument("diffuse_noise: length must exceed " +
                                std::to_string(kMinDiffuseLength) + " samples");
  const auto m_count = static_cast<Eigen::Index>(mics.size());
  Eigen::MatrixXd dist(m_count, m_count);
  for (Eigen::Index i = 0; i < m_count; ++i) {
    for (Eigen::Index j = 0; j < m_count; ++j) {
      dist(i, j) = distance(mics[static_cast<std::size_t>(i)], mics[static_cast<std::size_t>(j)]);
      if (i != j && dist(i, j) < 1e-9)
        throw std::invalid_argument("diffuse_noise: coincident microphones");
    }
  }

  MultichannelRecording rec;
  rec.sample_rate = sample_rate;
  if (m_count == 1) {
    rec.channels.push_back(rotor_surrogate(length, sample_rate, rotor_rps, mix_seed(seed, 1)));
    return rec;
  }

  const std::size_t n = next_pow2(length);
  std::vector<std::vector<cplx>> in(mics.size());
  for (std::size_t m = 0; m < mics.size(); ++m) {
    in[m] = real_spectrum(rotor_surrogate(n, sample_rate, rotor_rps, mix_seed(seed, m + 1)), n);
  }
  const auto mixing = coherence_factors(dist, sample_rate, speed_of_sound, n);
  std::vector<std::vector<cplx>> out(mics.size(), std::vector<cplx>(n));
  Eigen::VectorXcd x(m_count);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    for (Eigen::Index i = 0; i < m_count; ++i) x(i) = in[static_cast<std::size_t>(i)][k];
    const Eigen::VectorXcd y = (*mixing)[k].cast<cplx>() * x;
    for (Eigen::Index i = 0; i < m_count; ++i) {
      out[static_cast<std::size_t>(i)][k] = y(i);
      if (k != 0 && k != n / 2) out[static_cast<std::size_t>(i)][n - k] = std::conj(y(i));
    }
  }
  for (std::size_t m = 0; m < mics.size(); ++m) {
    auto ch = real_inverse(out[m]);
    ch.resize(length);
    rec.channels.push_back(std::move(ch));
  }
  return rec;
}

MultichannelRecording diffuse_noise(const ArrayGeometry& geom, std::size_t length,
                                    double rotor_rps, std::uint64_t seed) {
  return diffuse_noise(mic_positions(geom, Vec3{}), geom.sample_rate, geom.speed_of_sound, length,
                       rotor_rps, seed);
}

MultichannelRecording convolve_probe(const RirSet& rirs, const ProbeSignal& probe) {
  if (rirs.responses.empty()) throw std::invalid_argument("convolve_probe: empty RIR set");
  if (std::abs(rirs.sample_rate - probe.sample_rate) > 1e-9)
    throw std::invalid_argument("convolve_probe: RIR and probe sample rates differ");
  MultichannelRecording rec;
  rec.sample_rate = probe.sample_rate;
  const std::span<const double> active(probe.samples.data(), probe.active_len);
  for (const auto& h : rirs.responses) {
    rec.channels.push_back(fft_convolve(h, active, probe.samples.size()));
  }
  return rec;
}

MultichannelRecording add_noise(const MultichannelRecording& clean, const ProbeSignal& probe,
                                const NoiseModel& noise, const ArrayGeometry& geom) {
  clean.validate();
  noise.validate();
  geom.validate();
  if (static_cast<int>(clean.channel_count()) != geom.mic_count)
    throw std::invalid_argument("add_noise: channel count does not match array geometry");
  if (std::abs(clean.sample_rate - geom.sample_rate) > 1e-9)
    throw std::invalid_argument("add_noise: recording and array sample rates differ");

  MultichannelRecording out = clean;
  const std::size_t n = clean.length();
  const auto ref = static_cast<std::size_t>(geom.reference_index);

  double signal_var = 0.0;
  if (noise.snr_reference == NoiseModel::SnrReference::Reverberant) {
    signal_var = variance(clean.channels[ref]);
  } else {
    const auto direct = direct_path_template(geom, probe, n);
    std::vector<double> refl(n);
    for (std::size_t i = 0; i < n; ++i) refl[i] = clean.channels[ref][i] - direct[i];
    signal_var = variance(refl);
  }
  if (signal_var <= 0.0) return out;

  if (noise.include_diffuse && std::isfinite(noise.sdnr_db)) {
    const auto diffuse = diffuse_noise(geom, n, noise.rotor_rps, mix_seed(noise.seed, 2));
    const double target = signal_var / std::pow(10.0, noise.sdnr_db / 10.0);
    const double scale = std::sqrt(target / variance(diffuse.channels[ref]));
    for (std::size_t m = 0; m < out.channel_count(); ++m) {
      for (std::size_t i = 0; i < n; ++i) out.channels[m][i] += scale * diffuse.channels[m][i];
    }
  }

  if (std::isfinite(noise.snr_db)) {
    const double target = signal_var / std::pow(10.0, noise.snr_db / 10.0);
    for (std::size_t m = 0; m < out.channel_count(); ++m) {
      std::mt19937_64 rng(mix_seed(noise.seed, 1, m));
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> w(n);
      for (auto& v : w) v = normal(rng);
      const double scale = std::sqrt(target / variance(w));
      for (std::size_t i = 0; i < n; ++i) out.channels[m][i] += scale * w[i];
    }
  }
  return out;
}

MultichannelRecording render_observation(const RirSet& rirs, const ProbeSignal& probe,
                                         const NoiseModel& noise, const ArrayGeometry& geom) {
  if (static_cast<int>(rirs.responses.size()) != geom.mic_count)
    throw std::invalid_argument("render_observation: RIR count does not match array geometry");
  if (std::abs(geom.sample_rate - probe.sample_rate) > 1e-9)
    throw std::invalid_argument("render_observation: sample rates differ");
  return add_noise(convolve_probe(rirs, probe), probe, noise, geom);
}

std::vector<double> direct_path_template(const ArrayGeometry& geom, const ProbeSignal& probe,
                                         std::size_t length) {
  geom.validate();
  const auto taps = fractional_delay_taps(geom.radius * geom.sample_rate / geom.speed_of_sound);
  const double gain = 1.0 / (4.0 * kPi * geom.radius);
  std::vector<double> h(static_cast<std::size_t>(std::max(0L, taps.start + 4)), 0.0);
  for (int i = 0; i < 4; ++i) {
    const long n = taps.start + i;
    if (n >= 0) h[static_cast<std::size_t>(n)] += gain * taps.weights[static_cast<std::size_t>(i)];
  }
  const std::span<const double> active(probe.samples.data(), probe.active_len);
  return fft_convolve(h, active, length);
}

MultichannelRecording direct_path_removal(const MultichannelRecording& rec,
                                          const ArrayGeometry& geom, const ProbeSignal& probe) {
  rec.validate();
  const auto direct = direct_path_template(geom, probe, rec.length());
  MultichannelRecording out = rec;
  for (auto& ch : out.channels) {
    for (std::size_t i = 0; i < ch.size(); ++i) ch[i] -= direct[i];
  }
  return out;
}

}  // namespace echomap
