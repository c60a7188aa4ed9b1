// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include "echomap/classifier.hpp"
#include "echomap/pipeline.hpp"

#include <optional>
#include <vector>

namespace echomap {

struct Trajectory {
  std::vector<Pose> poses;
  double probe_interval_s = 1.0;

  // Every pose must leave more than `clearance` metres to each lateral wall.
  void validate(const RoomSpec& room, double clearance) const;
};

// Counterclockwise rectangular loops, one per margin, with poses every `spacing`
// metres along each loop. Headings follow the direction of travel.
Trajectory wall_following(const RoomSpec& room, const std::vector<double>& margins,
                          double spacing);

struct ReflectorPoint {
  double x = 0.0;
  double y = 0.0;
  std::size_t source_pose = 0;
  bool accepted = true;
  EchoFeature feature;
  ToaEstimate toa;
  DoaEstimate doa;
};

struct SpatialMap {
  std::vector<ReflectorPoint> points;
  RoomSpec room;
  Trajectory trajectory;
};

// range = c tau / (2 fs), placed along heading + azimuth from the pose.
ReflectorPoint project(const Pose& pose, const ToaEstimate& toa, const DoaEstimate& doa,
                       const ArrayGeometry& geom);

// One point per pose. Pose i uses noise seed mix_seed(noise.seed, i).
SpatialMap build_map(const Trajectory& traj, const RoomSpec& room, const ProbeSignal& probe,
                     const NoiseModel& noise, const PipelineConfig& cfg,
                     const SvmModel* model = nullptr, int jobs = 1);

// Same estimates, acceptance flags recomputed from the model (all accepted if none).
SpatialMap apply_classifier(SpatialMap map, const SvmModel* model);

struct MapMetrics {
  double wall_fraction = 0.0;
  std::size_t spurious_count = 0;
  std::size_t accepted_count = 0;
};

// Distance from (x, y) to the nearest segment of the room's rectangular outline.
double distance_to_outline(const RoomSpec& room, double x, double y);

MapMetrics map_metrics(const SpatialMap& map, double tol_m = 0.3);

}  // namespace echomap
