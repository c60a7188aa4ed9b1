// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/config.hpp"
#include "echomap/io.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace echomap;
namespace fs = std::filesystem;

namespace {

Json base() { return read_json(fs::path(ECHOMAP_SOURCE_DIR) / "configs" / "default.json"); }

std::string error_of(const Json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("shipped configs parse") {
  const auto cfg = parse_config(base());
  CHECK(cfg.seed == 2026);
  CHECK(cfg.pipeline.geom.mic_count == 6);
  CHECK(cfg.pipeline.geom.radius == 0.2);
  CHECK(cfg.pipeline.doa.grid.azimuth_step == doctest::Approx(std::numbers::pi / 180.0));
  CHECK(cfg.classifier.dataset.grid_points == 1989);
  CHECK(cfg.classifier.dataset.room.height == 7.0);
  CHECK(cfg.map.room.length == 8.0);
  CHECK(cfg.experiment.trials == 50);
  CHECK_NOTHROW(load_config(fs::path(ECHOMAP_SOURCE_DIR) / "configs" / "smoke.json"));
}

TEST_CASE("minimal document uses defaults") {
  const auto cfg = parse_config(Json{{"version", 1}});
  CHECK(cfg.room.length == 10.0);
  CHECK(cfg.pose.x == 8.5);
  CHECK(cfg.noise.snr_db == 10.0);
  CHECK(cfg.pipeline.toa.dft_len == 32768);
}

TEST_CASE("normalized form parses back to the same document") {
  const auto cfg = parse_config(base());
  const auto j = to_json(cfg);
  CHECK(to_json(parse_config(j)) == j);
}

TEST_CASE("strict field checking") {
  auto doc = base();
  doc["room"]["lenght"] = 3.0;
  CHECK(error_of(doc).find("room.lenght") != std::string::npos);

  doc = base();
  doc["extra"] = 1;
  CHECK(error_of(doc).find("extra") != std::string::npos);

  doc = base();
  doc["array"]["radius"] = "wide";
  CHECK(error_of(doc).find("array.radius") != std::string::npos);
}

TEST_CASE("field-precise validation messages") {
  auto doc = base();
  doc["array"]["radius"] = -0.2;
  CHECK(error_of(doc).find("array.radius") != std::string::npos);

  doc = base();
  doc["array"]["reference_index"] = 6;
  CHECK(error_of(doc).find("array.reference_index") != std::string::npos);

  doc = base();
  doc["estimator"]["search_min_m"] = 2.5;
  CHECK(error_of(doc).find("estimator") != std::string::npos);

  doc = base();
  doc["pose"]["x"] = 9.9;
  CHECK(error_of(doc).find("pose") != std::string::npos);

  doc = base();
  doc["classifier"]["folds"] = 1;
  CHECK(error_of(doc).find("classifier.folds") != std::string::npos);

  doc = base();
  doc["beam"]["hop"] = 400;
  CHECK(error_of(doc).find("beam") != std::string::npos);

  doc = base();
  doc["noise"]["snr_db"] = "loud";
  CHECK(error_of(doc).find("noise.snr_db") != std::string::npos);
}

TEST_CASE("version handling") {
  auto doc = base();
  doc["version"] = 2;
  CHECK(error_of(doc).find("version") != std::string::npos);
  doc.erase("version");
  CHECK(error_of(doc).find("version") != std::string::npos);
}

TEST_CASE("infinite SNR is spelled as a string") {
  auto doc = base();
  doc["noise"]["snr_db"] = "inf";
  CHECK(std::isinf(parse_config(doc).noise.snr_db));
  CHECK(to_json(parse_config(doc))["noise"]["snr_db"] == "inf");
}

TEST_CASE("derived seeds differ per purpose") {
  const auto cfg = parse_config(base());
  const auto p = cfg.training_protocol();
  CHECK(cfg.sim_noise().seed != cfg.map_noise().seed);
  CHECK(p.dataset.seed != p.split_seed);
  CHECK(p.split_seed != p.cv_seed);
  CHECK(p.dataset.room.sample_rate == cfg.pipeline.geom.sample_rate);
  const auto t60 = cfg.experiment_spec(SweepVariable::T60);
  CHECK(t60.noise.snr_db == cfg.experiment.fixed_snr_db);
  CHECK(t60.values == cfg.experiment.t60_values);
}

TEST_CASE("malformed files report a location") {
  const fs::path dir = fs::path(ECHOMAP_TEST_TMP) / "config";
  fs::create_directories(dir);
  write_text(dir / "bad.json", "{\n  \"version\": 1,\n  \"seed\": \n}\n");
  try {
    load_config(dir / "bad.json");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config(dir / "absent.json"), ConfigError);
}

}
