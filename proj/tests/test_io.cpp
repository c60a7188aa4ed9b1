// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/io.hpp"

#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>

using namespace echomap;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name) {
  const fs::path dir = fs::path(ECHOMAP_TEST_TMP) / "io";
  fs::create_directories(dir);
  return dir / name;
}

MultichannelRecording random_recording(std::size_t ch, std::size_t len) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  MultichannelRecording r;
  r.sample_rate = 22050.0;
  r.channels.assign(ch, std::vector<double>(len));
  for (auto& c : r.channels)
    for (auto& v : c) v = u(rng);
  return r;
}

template <typename T>
void put(std::ofstream& f, T v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("float WAV round trip") {
  const auto rec = random_recording(6, 1000);
  const auto path = tmp("rec.wav");
  write_wav(path, rec);
  const auto back = read_wav(path);
  CHECK(back.sample_rate == 22050.0);
  REQUIRE(back.channel_count() == 6);
  REQUIRE(back.length() == 1000);
  for (std::size_t m = 0; m < 6; ++m) CHECK(back.channels[m] == rec.channels[m]);
  CHECK(read_recording(path).channels == rec.channels);
}

TEST_CASE("PCM16 WAV input") {
  const auto path = tmp("pcm.wav");
  {
    std::ofstream f(path, std::ios::binary);
    const std::int16_t samples[4] = {0, 16384, -32768, 32767};
    f.write("RIFF", 4);
    put<std::uint32_t>(f, 36 + 8);
    f.write("WAVEfmt ", 8);
    put<std::uint32_t>(f, 16);
    put<std::uint16_t>(f, 1);
    put<std::uint16_t>(f, 2);
    put<std::uint32_t>(f, 8000);
    put<std::uint32_t>(f, 8000 * 4);
    put<std::uint16_t>(f, 4);
    put<std::uint16_t>(f, 16);
    f.write("data", 4);
    put<std::uint32_t>(f, 8);
    f.write(reinterpret_cast<const char*>(samples), sizeof(samples));
  }
  const auto rec = read_wav(path);
  CHECK(rec.sample_rate == 8000.0);
  REQUIRE(rec.channel_count() == 2);
  REQUIRE(rec.length() == 2);
  CHECK(rec.channels[0][0] == 0.0);
  CHECK(rec.channels[1][0] == 0.5);
  CHECK(rec.channels[0][1] == -1.0);
  CHECK(rec.channels[1][1] == doctest::Approx(32767.0 / 32768.0));
}

TEST_CASE("raw float32 with sidecar") {
  const auto rec = random_recording(3, 257);
  const auto path = tmp("rec.f32");
  write_raw_f32(path, rec);
  const auto side = read_json(fs::path(path.string() + ".json"));
  CHECK(side["channels"] == 3);
  CHECK(side["frames"] == 257);
  CHECK(side["layout"] == "interleaved");
  CHECK(fs::file_size(path) == 3 * 257 * 4);
  const auto back = read_recording(path);
  CHECK(back.channels == rec.channels);
  CHECK(back.sample_rate == 22050.0);
}

TEST_CASE("unreadable inputs") {
  CHECK_THROWS(read_wav(tmp("missing.wav")));
  const auto bad = tmp("bad.wav");
  write_text(bad, "not a wav file at all, definitely not");
  CHECK_THROWS(read_wav(bad));
  CHECK_THROWS(read_recording(tmp("rec.txt")));
}

TEST_CASE("numbers format to the shortest round-trip form") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("SVM model JSON round trip") {
  SvmModel m;
  m.support_vectors = {{0.5, -1.25}, {1.0 / 3.0, 2.0}};
  m.dual_coeffs = {0.75, -0.75};
  m.bias = -0.1;
  m.rbf_width = 0.1;
  m.box_c = 10.0;
  m.feat_mean = {180.0, -3.0};
  m.feat_std = {20.0, 4.5};
  const auto path = tmp("model.json");
  write_json(path, to_json(m));
  const auto back = svm_from_json(read_json(path));
  CHECK(back.support_vectors == m.support_vectors);
  CHECK(back.dual_coeffs == m.dual_coeffs);
  CHECK(back.bias == m.bias);
  CHECK(back.rbf_width == m.rbf_width);
  CHECK(back.feat_mean == m.feat_mean);
  CHECK(back.feat_std == m.feat_std);
  const EchoFeature f{170.0, 0.5};
  CHECK(back.decision(f) == m.decision(f));

  Json broken = to_json(m);
  broken["dual_coeffs"].push_back(1.0);
  CHECK_THROWS(svm_from_json(broken));
}

TEST_CASE("tabular and vector outputs") {
  const ToaEstimate t{192.0, 0.3, 10.0, 8.0, false, false};
  const auto j = to_json(t, 22050.0, 343.0);
  CHECK(j["tau_samples"] == 192.0);
  CHECK(j["range_m"].get<double>() == doctest::Approx(192.0 * 343.0 / 44100.0));

  SpatialMap map;
  map.room = RoomSpec{8.0, 6.0, 5.0};
  ReflectorPoint p;
  p.x = 7.9;
  p.y = 3.0;
  map.points.push_back(p);
  const auto csv = map_csv(map);
  CHECK(csv.rfind("x,y", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(map_svg(map).find("<svg") != std::string::npos);

  AccuracyCurve c;
  c.values = {-10.0, 40.0};
  c.trials = {50, 50};
  c.methods = {{"snls", {0.6, 1.0}, {0.2, 1.0}}, {"baseline", {0.2, 0.9}, {}}};
  const auto ccsv = curve_csv(c);
  CHECK(std::count(ccsv.begin(), ccsv.end(), '\n') == 3);
  CHECK(curve_svg(c).find("</svg>") != std::string::npos);
  CHECK(to_json(c)["methods"].size() == 2);
}

}
