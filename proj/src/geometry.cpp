// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/geometry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace echomap {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double wrap_angle(double radians) {
  double w = std::fmod(radians + std::numbers::pi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  w -= std::numbers::pi;
  if (w >= std::numbers::pi) w -= kTwoPi;
  return w;
}

void ArrayGeometry::validate() const {
  if (mic_count < 2) throw std::invalid_argument("array.mic_count: must be >= 2");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("array.radius: must be > 0");
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
    throw std::invalid_argument("array.sample_rate: must be > 0");
  if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound))
    throw std::invalid_argument("array.speed_of_sound: must be > 0");
  if (!std::isfinite(offset_angle)) throw std::invalid_argument("array.offset_angle: not finite");
  if (reference_index < 0 || reference_index >= mic_count)
    throw std::invalid_argument("array.reference_index: out of range");
}

double ArrayGeometry::mic_angle(int mic) const {
  return offset_angle + kTwoPi * static_cast<double>(mic) / static_cast<double>(mic_count);
}

std::vector<Vec3> mic_positions(const ArrayGeometry& geom, const Vec3& center, double heading) {
  geom.validate();
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(geom.mic_count));
  for (int m = 0; m < geom.mic_count; ++m) {
    const double a = heading + geom.mic_angle(m);
    out.push_back({center.x + geom.radius * std::cos(a), center.y + geom.radius * std::sin(a),
                   center.z});
  }
  return out;
}

double tdoa(const ArrayGeometry& geom, double azimuth, double elevation, int mic) {
  geom.validate();
  if (mic < 0 || mic >= geom.mic_count)
    throw std::out_of_range("tdoa: microphone index " + std::to_string(mic) + " out of range");
  if (mic == geom.reference_index) return 0.0;
  const double ref = geom.mic_angle(geom.reference_index);
  const double th = geom.mic_angle(mic);
  return geom.radius * std::sin(elevation) * (std::cos(ref - azimuth) - std::cos(th - azimuth)) *
         geom.sample_rate / geom.speed_of_sound;
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double azimuth, double elevation,
                                 int bin, int dft_len) {
  if (dft_len <= 0 || bin < 0 || bin >= dft_len)
    throw std::out_of_range("steering_vector: bin out of range");
  Eigen::VectorXcd d(geom.mic_count);
  // Bins above Nyquist are negative frequencies of a real signal.
  const int signed_bin = 2 * bin > dft_len ? bin - dft_len : bin;
  const double omega = kTwoPi * static_cast<double>(signed_bin) / static_cast<double>(dft_len);
  for (int m = 0; m < geom.mic_count; ++m) {
    const double phase = -omega * tdoa(geom, azimuth, elevation, m);
    d(m) = std::polar(1.0, phase);
  }
  return d;
}

ProbeSignal generate_probe(std::size_t active_len, std::size_t total_len, double sample_rate,
                           std::uint64_t seed) {
  if (active_len == 0 || active_len > total_len)
    throw std::invalid_argument("probe: require 0 < active_len <= total_len");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("probe.sample_rate: must be > 0");
  ProbeSignal p;
  p.samples.assign(total_len, 0.0);
  p.active_len = active_len;
  p.sample_rate = sample_rate;
  p.rng_seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < active_len; ++i) p.samples[i] = normal(rng);
  return p;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

}  // namespace echomap
