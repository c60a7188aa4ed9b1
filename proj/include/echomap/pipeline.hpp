// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include "echomap/classifier.hpp"
#include "echomap/doa.hpp"
#include "echomap/geometry.hpp"
#include "echomap/room_sim.hpp"
#include "echomap/toa.hpp"

#include <cstdint>
#include <vector>

namespace echomap {

/// Everything needed to turn a pose into an echo estimate.
struct PipelineConfig {
  ArrayGeometry geom;
  FreqDomainConfig toa;
  DoaConfig doa;
  std::size_t rir_length = 8192;
  double array_height = -1.0;  // negative: half the room height
  bool remove_direct = true;

  void validate(std::size_t observation_len) const;
};

// 3-D position of the array center (and loudspeaker) for a planar pose.
Vec3 array_center(const Pose& pose, const RoomSpec& room, const PipelineConfig& cfg);

// Indices of the four lateral walls.
enum class Wall { XMin = 0, XMax = 1, YMin = 2, YMax = 3 };

/// First-order echo off one lateral wall as seen by the reference microphone.
struct WallEcho {
  Wall wall = Wall::XMin;
  double tau = 0.0;      // samples, image source to reference microphone
  double azimuth = 0.0;  // array frame, direction of the image source from the array center
  double range = 0.0;    // perpendicular distance from the array center to the wall [m]
};

// Mirror-geometry echoes for all four lateral walls, in wall order.
std::vector<WallEcho> lateral_wall_echoes(const Pose& pose, const RoomSpec& room,
                                          const PipelineConfig& cfg);

// Echo whose delay is closest to tau (ties: lower wall index).
const WallEcho& closest_echo(const std::vector<WallEcho>& echoes, double tau);

RirSet pose_rirs(const Pose& pose, const RoomSpec& room, const PipelineConfig& cfg);

// Renders the noisy observation and removes the direct path if configured.
MultichannelRecording observe(const RirSet& rirs, const ProbeSignal& probe,
                              const NoiseModel& noise, const PipelineConfig& cfg);

struct PoseProbe {
  ToaEstimate toa;
  SrpResult srp;
  EchoFeature feature;
};

// TOA on the reference channel, then the SRP scan over the echo-bearing frames.
// `rec` is expected to have the direct path already removed.
PoseProbe estimate_echo(const MultichannelRecording& rec, const ProbeSignal& probe,
                        const PipelineConfig& cfg);

PoseProbe probe_at_pose(const Pose& pose, const RoomSpec& room, const ProbeSignal& probe,
                        const NoiseModel& noise, const PipelineConfig& cfg);

/// Training-set generation over a regular grid of poses.
struct DatasetConfig {
  RoomSpec room{10.0, 8.0, 7.0};
  std::size_t grid_points = 1989;
  double snr_min_db = -40.0;
  double snr_max_db = 40.0;
  double margin = 0.25;  // clearance from the walls [m]
  NoiseModel noise;      // snr_db is replaced per point
  std::uint64_t seed = 0;

  void validate(const ArrayGeometry& geom) const;
};

// Factors n into nx * ny with nx / ny closest to the room aspect ratio and returns
// the cell-centred poses (heading 0), row-major in y then x.
std::vector<Pose> grid_poses(const RoomSpec& room, std::size_t n, double margin);

std::vector<LabeledSample> generate_dataset(const DatasetConfig& dcfg, const ProbeSignal& probe,
                                            const PipelineConfig& cfg, int jobs = 1);

}  // namespace echomap
