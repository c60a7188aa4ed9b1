// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

using namespace echomap;
using std::numbers::pi;

TEST_SUITE("geometry") {

TEST_CASE("mic_positions rejects a single microphone") {
  ArrayGeometry g;
  g.mic_count = 1;
  CHECK_THROWS_AS(mic_positions(g, Vec3{}), std::invalid_argument);
}

TEST_CASE("four-mic array sits on the axes") {
  ArrayGeometry g;
  g.mic_count = 4;
  const auto p = mic_positions(g, Vec3{});
  REQUIRE(p.size() == 4);
  const double expected[4][2] = {{0.2, 0.0}, {0.0, 0.2}, {-0.2, 0.0}, {0.0, -0.2}};
  for (int m = 0; m < 4; ++m) {
    CHECK(std::abs(p[m].x - expected[m][0]) < 1e-12);
    CHECK(std::abs(p[m].y - expected[m][1]) < 1e-12);
    CHECK(std::hypot(p[m].x, p[m].y) == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("six-mic adjacent spacing equals the chord length") {
  ArrayGeometry g;
  const auto p = mic_positions(g, Vec3{1.0, 2.0, 1.5});
  const double chord = 2.0 * 0.2 * std::sin(pi / 6.0);
  for (int m = 0; m < 6; ++m) {
    CHECK(distance(p[m], p[(m + 1) % 6]) == doctest::Approx(chord).epsilon(1e-12));
    CHECK(p[m].z == 1.5);
  }
}

TEST_CASE("microphone angles follow the uniform layout") {
  ArrayGeometry g;
  g.offset_angle = 0.3;
  for (int m = 0; m < g.mic_count; ++m)
    CHECK(g.mic_angle(m) == doctest::Approx(0.3 + 2.0 * pi * m / 6.0).epsilon(1e-15));
}

TEST_CASE("pose heading is wrapped to [-pi, pi)") {
  CHECK(Pose(0, 0, pi).heading == doctest::Approx(-pi));
  CHECK(Pose(0, 0, 3.0 * pi / 2.0).heading == doctest::Approx(-pi / 2.0));
  CHECK(Pose(0, 0, -pi).heading == doctest::Approx(-pi));
  CHECK(wrap_angle(2.0 * pi + 0.1) == doctest::Approx(0.1));
}

TEST_CASE("tdoa vanishes at zero elevation and on the reference mic") {
  ArrayGeometry g;
  for (int m = 0; m < 6; ++m) CHECK(tdoa(g, 0.7, 0.0, m) == 0.0);
  CHECK(tdoa(g, 1.234, pi / 2.0, g.reference_index) == 0.0);
}

TEST_CASE("tdoa matches the plane-wave path difference") {
  ArrayGeometry g;
  const double value = tdoa(g, 0.0, pi / 2.0, 1);
  CHECK(value == doctest::Approx(0.2 * (1.0 - std::cos(pi / 3.0)) * 22050.0 / 343.0).epsilon(1e-12));
  CHECK(value == doctest::Approx(6.43).epsilon(1e-3));

  // Independent oracle: projection of mic positions on the arrival direction.
  const auto p = mic_positions(g, Vec3{});
  for (double az : {0.0, 0.4, 2.0, -2.5}) {
    const double ux = std::cos(az), uy = std::sin(az);
    for (int m = 0; m < 6; ++m) {
      const double lead = (p[m].x - p[0].x) * ux + (p[m].y - p[0].y) * uy;
      CHECK(tdoa(g, az, pi / 2.0, m) == doctest::Approx(-lead * 22050.0 / 343.0).scale(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("tdoa index out of range") {
  ArrayGeometry g;
  CHECK_THROWS_AS(tdoa(g, 0.0, pi / 2.0, 6), std::out_of_range);
  CHECK_THROWS_AS(tdoa(g, 0.0, pi / 2.0, -1), std::out_of_range);
}

TEST_CASE("tdoa is antisymmetric when the reference and target microphones swap") {
  ArrayGeometry g;
  for (int m = 1; m < 6; ++m) {
    ArrayGeometry swapped = g;
    swapped.reference_index = m;
    CHECK(tdoa(swapped, 0.9, 1.1, 0) == doctest::Approx(-tdoa(g, 0.9, 1.1, m)).epsilon(1e-12));
  }
}

TEST_CASE("tdoa is bounded by the aperture") {
  ArrayGeometry g;
  const double bound = 2.0 * g.radius * g.sample_rate / g.speed_of_sound;
  for (int a = 0; a < 360; a += 7)
    for (double el : {0.2, 1.0, pi / 2.0})
      for (int m = 0; m < 6; ++m) CHECK(std::abs(tdoa(g, a * pi / 180.0, el, m)) <= bound + 1e-12);
}

TEST_CASE("steering vector special cases") {
  ArrayGeometry g;
  const int K = 512;
  auto ones = steering_vector(g, 0.5, pi / 2.0, 0, K);
  for (int m = 0; m < 6; ++m) CHECK(std::abs(ones(m) - 1.0) < 1e-15);
  ones = steering_vector(g, 0.5, 0.0, 37, K);
  for (int m = 0; m < 6; ++m) CHECK(std::abs(ones(m) - 1.0) < 1e-15);

  const auto d = steering_vector(g, 0.0, pi / 2.0, K / 4, K);
  const double expected = -2.0 * pi * 0.25 * tdoa(g, 0.0, pi / 2.0, 1);
  CHECK(std::abs(d(1) - std::polar(1.0, expected)) < 1e-12);
  CHECK(std::abs(d(0) - 1.0) < 1e-15);
  for (int m = 0; m < 6; ++m) CHECK(std::abs(d(m)) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(steering_vector(g, 0.0, pi / 2.0, K, K), std::out_of_range);
  CHECK_THROWS_AS(steering_vector(g, 0.0, pi / 2.0, -1, K), std::out_of_range);
}

TEST_CASE("steering vector conjugate symmetry") {
  ArrayGeometry g;
  const int K = 882;
  for (int k : {1, 10, 200, 440}) {
    const auto a = steering_vector(g, 1.3, 1.0, k, K);
    const auto b = steering_vector(g, 1.3, 1.0, K - k, K);
    for (int m = 0; m < 6; ++m) CHECK(std::abs(a(m) - std::conj(b(m))) < 1e-12);
  }
}

TEST_CASE("probe shape, padding and determinism") {
  const auto p = generate_probe(1500, 20000, 22050.0, 42);
  REQUIRE(p.samples.size() == 20000);
  CHECK(p.active_len == 1500);
  for (std::size_t i = 1500; i < 20000; ++i) REQUIRE(p.samples[i] == 0.0);
  const double mean = std::accumulate(p.samples.begin(), p.samples.begin() + 1500, 0.0) / 1500.0;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(1500.0));

  const auto q = generate_probe(1500, 20000, 22050.0, 42);
  CHECK(p.samples == q.samples);
  const auto r = generate_probe(1500, 20000, 22050.0, 43);
  CHECK(p.samples != r.samples);

  const auto full = generate_probe(64, 64, 22050.0, 1);
  CHECK(full.samples.size() == 64);
  CHECK(full.samples.back() != 0.0);

  CHECK_THROWS_AS(generate_probe(0, 10, 22050.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_probe(11, 10, 22050.0, 1), std::invalid_argument);
}

TEST_CASE("geometry validation names the field") {
  ArrayGeometry g;
  g.radius = -0.1;
  try {
    g.validate();
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("radius") != std::string::npos);
  }
}

}
