// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/mapper.hpp"

#include "echomap/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace echomap {

namespace {

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

}  // namespace

void Trajectory::validate(const RoomSpec& room, double clearance) const {
  if (poses.empty()) throw std::invalid_argument("trajectory.poses: must be nonempty");
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const auto& p = poses[i];
    if (!(p.x > clearance && p.x < room.length - clearance && p.y > clearance &&
          p.y < room.width - clearance))
      throw std::invalid_argument("trajectory.poses[" + std::to_string(i) +
                                  "]: outside the room or closer than the array radius to a wall");
  }
}

Trajectory wall_following(const RoomSpec& room, const std::vector<double>& margins,
                          double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("trajectory.spacing: must be > 0");
  if (margins.empty()) throw std::invalid_argument("trajectory.margins: must be nonempty");
  Trajectory traj;
  for (double m : margins) {
    const double x0 = m, x1 = room.length - m, y0 = m, y1 = room.width - m;
    if (!(x1 > x0 && y1 > y0)) throw std::invalid_argument("trajectory.margins: loop does not fit");
    const std::array<std::array<double, 2>, 5> corners{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}}};
    for (std::size_t s = 0; s < 4; ++s) {
      const double ax = corners[s][0], ay = corners[s][1];
      const double bx = corners[s + 1][0], by = corners[s + 1][1];
      const double len = std::hypot(bx - ax, by - ay);
      const double heading = std::atan2(by - ay, bx - ax);
      const auto steps = static_cast<std::size_t>(std::ceil(len / spacing - 1e-9));
      for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(steps);
        traj.poses.emplace_back(ax + t * (bx - ax), ay + t * (by - ay), heading);
      }
    }
  }
  return traj;
}

ReflectorPoint project(const Pose& pose, const ToaEstimate& toa, const DoaEstimate& doa,
                       const ArrayGeometry& geom) {
  const double range = tau_to_range(toa.tau, geom.sample_rate, geom.speed_of_sound);
  const double az = pose.heading + doa.azimuth;
  ReflectorPoint p;
  p.x = pose.x + range * std::cos(az);
  p.y = pose.y + range * std::sin(az);
  p.toa = toa;
  p.doa = doa;
  return p;
}

SpatialMap apply_classifier(SpatialMap map, const SvmModel* model) {
  for (auto& p : map.points)
    p.accepted = model == nullptr || predict(*model, p.feature).label == EchoClass::Wall;
  return map;
}

SpatialMap build_map(const Trajectory& traj, const RoomSpec& room, const ProbeSignal& probe,
                     const NoiseModel& noise, const PipelineConfig& cfg, const SvmModel* model,
                     int jobs) {
  room.validate();
  cfg.validate(probe.samples.size());
  traj.validate(room, cfg.geom.radius);
  SpatialMap map;
  map.room = room;
  map.trajectory = traj;
  map.points.resize(traj.poses.size());
  parallel_for(traj.poses.size(), jobs, [&](std::size_t i) {
    NoiseModel n = noise;
    n.seed = mix_seed(noise.seed, i);
    const auto res = probe_at_pose(traj.poses[i], room, probe, n, cfg);
    auto pt = project(traj.poses[i], res.toa, res.srp.best, cfg.geom);
    pt.source_pose = i;
    pt.feature = res.feature;
    map.points[i] = pt;
  });
  return apply_classifier(std::move(map), model);
}

double distance_to_outline(const RoomSpec& room, double x, double y) {
  const double l = room.length, w = room.width;
  return std::min({segment_distance(x, y, 0, 0, l, 0), segment_distance(x, y, l, 0, l, w),
                   segment_distance(x, y, l, w, 0, w), segment_distance(x, y, 0, w, 0, 0)});
}

MapMetrics map_metrics(const SpatialMap& map, double tol_m) {
  MapMetrics m;
  std::size_t near = 0;
  for (const auto& p : map.points) {
    if (!p.accepted) continue;
    ++m.accepted_count;
    if (distance_to_outline(map.room, p.x, p.y) <= tol_m) ++near;
  }
  m.spurious_count = m.accepted_count - near;
  m.wall_fraction = m.accepted_count == 0
                        ? 0.0
                        : static_cast<double>(near) / static_cast<double>(m.accepted_count);
  return m;
}

}  // namespace echomap
