// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include "echomap/geometry.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace echomap {

enum class AbsorptionModel {
  Sabine,      // alpha = 0.161 V / (S T60)
  Eyring,      // alpha = 1 - exp(-0.161 V / (S T60))
  Calibrated,  // coefficient solved so the image-source decay itself reaches T60
};

struct RoomSpec {
  double length = 10.0;  // x extent [m]
  double width = 8.0;    // y extent [m]
  double height = 5.0;   // z extent [m]
  double t60 = 0.6;
  double sample_rate = 22050.0;
  double speed_of_sound = 343.0;
  AbsorptionModel absorption = AbsorptionModel::Calibrated;

  void validate() const;
  double volume() const { return length * width * height; }
  double surface() const { return 2.0 * (length * width + length * height + width * height); }
  bool contains(const Vec3& p, double margin = 0.0) const;
};

struct ReflectionCoefficient {
  double value = 0.0;
  bool anechoic = false;
};

// Uniform wall pressure reflection coefficient for the room's T60.
//
// Sabine and Eyring return sqrt(1 - alpha_wall). Calibrated bisects the
// coefficient until a -5 to -25 dB Schroeder fit of the image-source impulse
// response, for a source at (0.35, 0.40, 0.45) and a receiver at (0.70, 0.65,
// 0.35) of the room dimensions, equals T60. Targets too short to produce a
// fittable decay come back anechoic. Above kMaxCalibratedT60 the Eyring
// log-coefficient is scaled by the ratio found at that limit.
inline constexpr double kMaxCalibratedT60 = 2.0;
ReflectionCoefficient t60_to_reflection_coeff(const RoomSpec& room);
ReflectionCoefficient t60_to_reflection_coeff(const RoomSpec& room, AbsorptionModel model);

struct RirSet {
  std::vector<std::vector<double>> responses;
  double sample_rate = 0.0;
  int max_order = -1;  // -1: limited only by the response length
};

// Cubic Lagrange fractional delay: taps land on floor(delay)-1 .. floor(delay)+2.
// An integer delay yields a single unit tap.
struct DelayTaps {
  long start = 0;
  std::array<double, 4> weights{};
};
DelayTaps fractional_delay_taps(double delay_samples);

// Image-source room impulse responses from `source` to each microphone.
// max_order < 0 enumerates every image that lands within `length` samples.
RirSet simulate_rir(const RoomSpec& room, const Vec3& source, const std::vector<Vec3>& mics,
                    std::size_t length, int max_order = -1);

struct NoiseModel {
  static constexpr double kNoiseFree = std::numeric_limits<double>::infinity();

  enum class SnrReference {
    Reverberant,  // variance of the full reverberant probe x = h * s at the reference mic
    Reflections,  // variance of x with the analytic direct path removed
  };

  double snr_db = kNoiseFree;
  double sdnr_db = 40.0;
  double rotor_rps = 70.0;
  std::uint64_t seed = 0;
  bool include_diffuse = true;
  SnrReference snr_reference = SnrReference::Reverberant;

  void validate() const;
};

struct MultichannelRecording {
  std::vector<std::vector<double>> channels;
  double sample_rate = 0.0;

  std::size_t channel_count() const { return channels.size(); }
  std::size_t length() const { return channels.empty() ? 0 : channels.front().size(); }
  void validate() const;
};

// Monophonic rotor-noise surrogate: blade-pass harmonic stack over a 1/f floor, unit variance.
std::vector<double> rotor_surrogate(std::size_t length, double sample_rate, double rotor_rps,
                                    std::uint64_t seed, int blade_count = 4);

// Cylindrical (2-D) diffuse-field coherence J0(omega d / c).
double diffuse_coherence(double frequency_hz, double distance_m, double speed_of_sound);

// Multichannel noise whose pairwise coherence follows diffuse_coherence.
MultichannelRecording diffuse_noise(const std::vector<Vec3>& mics, double sample_rate,
                                    double speed_of_sound, std::size_t length, double rotor_rps,
                                    std::uint64_t seed);
MultichannelRecording diffuse_noise(const ArrayGeometry& geom, std::size_t length,
                                    double rotor_rps, std::uint64_t seed);

// Clean reverberant probe x_m = (h_m * s)(n), truncated to the probe length.
MultichannelRecording convolve_probe(const RirSet& rirs, const ProbeSignal& probe);

// Adds diffuse and white noise to a clean reverberant probe at the requested SDNR/SNR.
MultichannelRecording add_noise(const MultichannelRecording& clean, const ProbeSignal& probe,
                                const NoiseModel& noise, const ArrayGeometry& geom);

MultichannelRecording render_observation(const RirSet& rirs, const ProbeSignal& probe,
                                         const NoiseModel& noise, const ArrayGeometry& geom);

// Analytic direct-path contribution of a center-mounted source at each microphone.
std::vector<double> direct_path_template(const ArrayGeometry& geom, const ProbeSignal& probe,
                                         std::size_t length);

MultichannelRecording direct_path_removal(const MultichannelRecording& rec,
                                          const ArrayGeometry& geom, const ProbeSignal& probe);

double variance(const std::vector<double>& x);

}  // namespace echomap
