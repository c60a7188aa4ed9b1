// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/pipeline.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace echomap;

namespace {

constexpr double kPi = std::numbers::pi;

RoomSpec room_865() {
  RoomSpec r;
  r.length = 8.0;
  r.width = 6.0;
  r.height = 5.0;
  return r;
}

NoiseModel high_snr(std::uint64_t seed) {
  NoiseModel n;
  n.snr_db = 40.0;
  n.sdnr_db = 40.0;
  n.seed = seed;
  return n;
}

ProbeSignal probe() { return generate_probe(1500, 20000, 22050.0, 77); }

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("array sits at half the room height by default") {
  PipelineConfig cfg;
  const auto c = array_center(Pose(2.0, 3.0, 0.0), room_865(), cfg);
  CHECK(c.z == doctest::Approx(2.5));
  cfg.array_height = 1.2;
  CHECK(array_center(Pose(2.0, 3.0, 0.0), room_865(), cfg).z == doctest::Approx(1.2));
}

TEST_CASE("lateral wall echoes follow mirror geometry") {
  PipelineConfig cfg;
  RoomSpec room;  // 10 x 8 x 5
  const auto echoes = lateral_wall_echoes(Pose(8.5, 4.0, 0.0), room, cfg);
  REQUIRE(echoes.size() == 4);
  const auto& east = echoes[static_cast<std::size_t>(Wall::XMax)];
  CHECK(east.wall == Wall::XMax);
  CHECK(east.range == doctest::Approx(1.5));
  // Image of the speaker at x = 11.5, reference microphone at x = 8.7.
  CHECK(east.tau == doctest::Approx(2.8 * 22050.0 / 343.0));
  CHECK(east.azimuth == doctest::Approx(0.0));
  CHECK(echoes[static_cast<std::size_t>(Wall::YMax)].azimuth == doctest::Approx(kPi / 2.0));
  CHECK(closest_echo(echoes, 181.0).wall == Wall::XMax);

  // Rotating the robot rotates the array-frame azimuths.
  const auto turned = lateral_wall_echoes(Pose(8.5, 4.0, kPi / 2.0), room, cfg);
  CHECK(turned[static_cast<std::size_t>(Wall::XMax)].azimuth == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("pose 1.5 m from a wall at high SNR") {
  PipelineConfig cfg;
  // Reference microphone parallel to the wall so its path matches the round trip closely.
  const Pose pose(6.5, 3.0, kPi / 2.0);
  const auto res = probe_at_pose(pose, room_865(), probe(), high_snr(5), cfg);
  const double round_trip = 2.0 * 1.5 * 22050.0 / 343.0;
  CHECK(std::abs(res.toa.tau - round_trip) <= 1.0);
  CHECK_FALSE(res.toa.low_score);
  const double truth = -kPi / 2.0;
  CHECK(std::abs(wrap_angle(res.srp.best.azimuth - truth)) <= 2.0 * kPi / 180.0 + 1e-9);
  CHECK(res.feature.toa_delay == res.toa.tau);
  CHECK(res.feature.beam_power == res.srp.best.power);
}

TEST_CASE("room centre has no wall inside the search interval") {
  PipelineConfig cfg;
  const auto res = probe_at_pose(Pose(4.0, 3.0, 0.0), room_865(), probe(), high_snr(6), cfg);
  CHECK(res.toa.low_score);
}

TEST_CASE("probing is deterministic") {
  PipelineConfig cfg;
  NoiseModel n = high_snr(9);
  n.snr_db = 0.0;
  const auto a = probe_at_pose(Pose(2.0, 2.0, 0.3), room_865(), probe(), n, cfg);
  const auto b = probe_at_pose(Pose(2.0, 2.0, 0.3), room_865(), probe(), n, cfg);
  CHECK(a.toa.tau == b.toa.tau);
  CHECK(a.toa.score == b.toa.score);
  CHECK(a.srp.power == b.srp.power);
}

TEST_CASE("poses too close to a wall are rejected") {
  PipelineConfig cfg;
  CHECK_THROWS_AS(pose_rirs(Pose(0.1, 3.0, 0.0), room_865(), cfg), std::invalid_argument);
  CHECK_THROWS_AS(pose_rirs(Pose(9.0, 3.0, 0.0), room_865(), cfg), std::invalid_argument);
}

TEST_CASE("training grid layout") {
  const RoomSpec room{10.0, 8.0, 7.0};
  const auto poses = grid_poses(room, 1989, 0.25);
  REQUIRE(poses.size() == 1989);
  std::set<double> xs, ys;
  for (const auto& p : poses) {
    xs.insert(p.x);
    ys.insert(p.y);
    CHECK(p.x >= 0.25 - 1e-12);
    CHECK(p.x <= 9.75 + 1e-12);
    CHECK(p.y >= 0.25 - 1e-12);
    CHECK(p.y <= 7.75 + 1e-12);
    CHECK(p.heading == 0.0);
  }
  CHECK(xs.size() == 51);
  CHECK(ys.size() == 39);
}

TEST_CASE("small dataset generation") {
  PipelineConfig cfg;
  DatasetConfig d;
  d.grid_points = 6;
  d.seed = 4;
  const auto p = probe();
  const auto a = generate_dataset(d, p, cfg, 1);
  const auto b = generate_dataset(d, p, cfg, 3);
  REQUIRE(a.size() == 6);
  REQUIRE(b.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].feature.toa_delay == b[i].feature.toa_delay);
    CHECK(a[i].feature.beam_power == b[i].feature.beam_power);
    CHECK(a[i].label == label_for(a[i].feature.toa_delay, a[i].true_toa));
  }
  DatasetConfig bad = d;
  bad.margin = 0.1;  // inside the array radius
  CHECK_THROWS_AS(bad.validate(cfg.geom), std::invalid_argument);
}

}
