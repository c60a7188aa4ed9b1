// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <numbers>
#include <vector>

namespace echomap {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

// Wraps an angle to [-pi, pi).
double wrap_angle(double radians);

/// Uniform circular array with a loudspeaker at its center.
///
/// Microphone m (zero-based) sits at angle offset_angle + 2*pi*m/mic_count in
/// the array frame. Index 0 is the default reference microphone. Azimuth is
/// counterclockwise from the array x-axis; elevation pi/2 is horizontal.
struct ArrayGeometry {
  int mic_count = 6;
  double radius = 0.2;
  double offset_angle = 0.0;
  int reference_index = 0;
  double sample_rate = 22050.0;
  double speed_of_sound = 343.0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  double mic_angle(int mic) const;
};

/// Planar robot pose. heading is the world-frame yaw of the array's zero-angle axis.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double heading_) : x(x_), y(y_), heading(wrap_angle(heading_)) {}
};

std::vector<Vec3> mic_positions(const ArrayGeometry& geom, const Vec3& center,
                                double heading = 0.0);

// Far-field delay of microphone `mic` relative to the reference microphone, in
// (fractional) samples, for a plane wave arriving from (azimuth, elevation).
double tdoa(const ArrayGeometry& geom, double azimuth, double elevation, int mic);

// Element m is exp(-j 2 pi bin/dft_len * tdoa(m)), with bins above dft_len/2 read
// as negative frequencies.
Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double azimuth, double elevation,
                                 int bin, int dft_len);

struct ProbeSignal {
  std::vector<double> samples;
  std::size_t active_len = 0;
  double sample_rate = 0.0;
  std::uint64_t rng_seed = 0;
};

// Unit-variance white Gaussian prefix of active_len samples, zero padded to total_len.
ProbeSignal generate_probe(std::size_t active_len, std::size_t total_len, double sample_rate,
                           std::uint64_t seed);

// Deterministic 64-bit seed mixing (splitmix64 finalizer chain).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace echomap
