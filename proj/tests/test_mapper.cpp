// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/mapper.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace echomap;

namespace {

constexpr double kPi = std::numbers::pi;

ToaEstimate toa_for_range(double r) {
  ToaEstimate t;
  t.tau = 2.0 * r * 22050.0 / 343.0;
  return t;
}

RoomSpec room_865() {
  RoomSpec r;
  r.length = 8.0;
  r.width = 6.0;
  return r;
}

SpatialMap map_with(const std::vector<std::array<double, 2>>& pts) {
  SpatialMap m;
  m.room = room_865();
  for (const auto& p : pts) {
    ReflectorPoint r;
    r.x = p[0];
    r.y = p[1];
    m.points.push_back(r);
  }
  return m;
}

// Accepts echoes with a short delay.
SvmModel short_delay_model() {
  std::vector<LabeledSample> s;
  for (int i = 0; i < 40; ++i) {
    const double tau = 130.0 + 3.0 * i;
    s.push_back({{tau, 1.0 + 0.1 * (i % 3)}, tau < 190.0 ? EchoClass::Wall : EchoClass::NoWall, 0.0});
  }
  return train_svm(s, 10.0, 1.0);
}

}  // namespace

TEST_SUITE("mapper") {

TEST_CASE("projection examples") {
  const ArrayGeometry g;
  DoaEstimate ahead;
  const auto p0 = project(Pose(2.0, 2.0, 0.0), ToaEstimate{}, ahead, g);
  CHECK(p0.x == 2.0);
  CHECK(p0.y == 2.0);
  const auto p1 = project(Pose(2.0, 2.0, 0.0), toa_for_range(1.5), ahead, g);
  CHECK(p1.x == doctest::Approx(3.5));
  CHECK(p1.y == doctest::Approx(2.0));
  const auto p2 = project(Pose(2.0, 2.0, kPi / 2.0), toa_for_range(1.5), ahead, g);
  CHECK(p2.x == doctest::Approx(2.0));
  CHECK(p2.y == doctest::Approx(3.5));
}

TEST_CASE("projection is equivariant under a rigid rotation") {
  const ArrayGeometry g;
  const auto toa = toa_for_range(1.3);
  DoaEstimate doa;
  doa.azimuth = 0.8;
  for (double theta : {0.3, 1.7, -2.4}) {
    const Pose pose(1.0, 2.0, 0.5);
    const double c = std::cos(theta), s = std::sin(theta);
    const Pose rotated(c * pose.x - s * pose.y, s * pose.x + c * pose.y, pose.heading + theta);
    const auto a = project(pose, toa, doa, g);
    const auto b = project(rotated, toa, doa, g);
    CHECK(b.x == doctest::Approx(c * a.x - s * a.y));
    CHECK(b.y == doctest::Approx(s * a.x + c * a.y));
  }
}

TEST_CASE("outline distance and metrics") {
  const auto room = room_865();
  CHECK(distance_to_outline(room, 4.0, 3.0) == doctest::Approx(3.0));
  CHECK(distance_to_outline(room, 7.9, 3.0) == doctest::Approx(0.1));
  CHECK(distance_to_outline(room, 9.0, 7.0) == doctest::Approx(std::sqrt(2.0)));

  SUBCASE("all points on walls") {
    const auto m = map_metrics(map_with({{0.0, 1.0}, {8.0, 2.0}, {3.0, 6.0}, {5.0, 0.0}}));
    CHECK(m.wall_fraction == 1.0);
    CHECK(m.spurious_count == 0);
    CHECK(m.accepted_count == 4);
  }
  SUBCASE("all points at the centre") {
    const auto m = map_metrics(map_with({{4.0, 3.0}, {4.0, 3.0}}));
    CHECK(m.wall_fraction == 0.0);
    CHECK(m.spurious_count == 2);
  }
  SUBCASE("mixed set") {
    // distances 0.1, 0.3, 0.5, 1.0, 0.0 and a rejected point
    auto map = map_with({{0.1, 3.0}, {4.0, 5.7}, {7.5, 3.0}, {4.0, 1.0}, {8.0, 0.0}, {4.0, 3.0}});
    map.points.back().accepted = false;
    const auto m = map_metrics(map, 0.3);
    CHECK(m.accepted_count == 5);
    CHECK(m.spurious_count == 2);
    CHECK(m.wall_fraction == doctest::Approx(3.0 / 5.0));
    double last = -1.0;
    for (double tol : {0.0, 0.05, 0.2, 0.3, 0.6, 1.0, 5.0}) {
      const double f = map_metrics(map, tol).wall_fraction;
      CHECK(f >= last);
      last = f;
    }
    CHECK(last == 1.0);
  }
  CHECK(map_metrics(SpatialMap{}).wall_fraction == 0.0);
}

TEST_CASE("wall-following loops") {
  const auto room = room_865();
  const auto traj = wall_following(room, {1.5, 2.4}, 0.5);
  CHECK_NOTHROW(traj.validate(room, 0.2));
  // Sides of 5 and 3 m, then 3.2 and 1.2 m, each cut into ceil(len / 0.5) steps.
  CHECK(traj.poses.size() == 32 + 20);
  CHECK(traj.poses.front().x == 1.5);
  CHECK(traj.poses.front().y == 1.5);
  CHECK(traj.poses.front().heading == 0.0);
  CHECK_THROWS_AS(wall_following(room, {3.5}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(wall_following(room, {1.5}, 0.0), std::invalid_argument);
  Trajectory bad;
  bad.poses.emplace_back(0.1, 3.0, 0.0);
  CHECK_THROWS_AS(bad.validate(room, 0.2), std::invalid_argument);
}

TEST_CASE("classifier filtering only changes flags") {
  const auto room = room_865();
  PipelineConfig cfg;
  NoiseModel noise;
  noise.snr_db = 10.0;
  noise.seed = 3;
  Trajectory traj = wall_following(room, {1.5}, 2.0);
  const auto probe = generate_probe(1500, 20000, 22050.0, 5);

  const auto plain = build_map(traj, room, probe, noise, cfg);
  REQUIRE(plain.points.size() == traj.poses.size());
  for (const auto& p : plain.points) CHECK(p.accepted);

  const auto model = short_delay_model();
  const auto filtered = build_map(traj, room, probe, noise, cfg, &model, 2);
  const auto reapplied = apply_classifier(plain, &model);
  REQUIRE(filtered.points.size() == plain.points.size());
  std::size_t kept = 0;
  for (std::size_t i = 0; i < plain.points.size(); ++i) {
    const auto& a = plain.points[i];
    const auto& b = filtered.points[i];
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.source_pose == b.source_pose);
    CHECK(a.toa.tau == b.toa.tau);
    CHECK(a.feature.beam_power == b.feature.beam_power);
    CHECK(b.accepted == reapplied.points[i].accepted);
    CHECK(b.accepted == (predict(model, b.feature).label == EchoClass::Wall));
    kept += b.accepted ? 1 : 0;
  }
  CHECK(map_metrics(filtered).accepted_count == kept);
  CHECK(kept <= map_metrics(plain).accepted_count);
  CHECK(apply_classifier(filtered, nullptr).points.size() == plain.points.size());
}

}
