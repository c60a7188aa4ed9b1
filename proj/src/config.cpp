// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace echomap {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown fields.
class Section {
public:
  Section(const Json* obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (obj_ != nullptr && !obj_->is_object()) fail("", "must be an object");
  }

  bool present() const { return obj_ != nullptr; }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : key.empty() ? path_ : path_ + "." + key;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(field(key) + ": " + msg);
  }

  const Json* find(const std::string& key) {
    if (obj_ == nullptr) return nullptr;
    const auto it = obj_->find(key);
    if (it == obj_->end()) return nullptr;
    used_.insert(key);
    return &*it;
  }

  Section child(const std::string& key) { return Section(find(key), field(key)); }

  void number(const std::string& key, double& out, bool allow_inf = false) {
    const Json* v = find(key);
    if (v == nullptr) return;
    if (allow_inf && v->is_string()) {
      const auto s = v->get<std::string>();
      if (s == "inf") { out = std::numeric_limits<double>::infinity(); return; }
      fail(key, "expected a number or \"inf\"");
    }
    if (!v->is_number()) fail(key, "expected a number");
    out = v->get<double>();
    if (!std::isfinite(out)) fail(key, "must be finite");
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    const Json* v = find(key);
    if (v == nullptr) return;
    if (!v->is_number_integer()) fail(key, "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (v->is_number_unsigned()) {
        const auto u = v->get<std::uint64_t>();
        if (u > std::numeric_limits<Int>::max()) fail(key, "value too large");
        out = static_cast<Int>(u);
        return;
      }
      if (v->get<std::int64_t>() < 0) fail(key, "must be >= 0");
      out = static_cast<Int>(v->get<std::int64_t>());
    } else {
      const auto i = v->get<std::int64_t>();
      if (i < std::numeric_limits<Int>::min() || i > std::numeric_limits<Int>::max())
        fail(key, "value out of range");
      out = static_cast<Int>(i);
    }
  }

  void boolean(const std::string& key, bool& out) {
    const Json* v = find(key);
    if (v == nullptr) return;
    if (!v->is_boolean()) fail(key, "expected true or false");
    out = v->get<bool>();
  }

  template <typename Enum>
  void choice(const std::string& key, Enum& out,
              std::initializer_list<std::pair<const char*, Enum>> options) {
    const Json* v = find(key);
    if (v == nullptr) return;
    std::string allowed;
    for (const auto& [name, value] : options) allowed += std::string(allowed.empty() ? "" : ", ") + name;
    if (!v->is_string()) fail(key, "expected one of: " + allowed);
    const auto s = v->get<std::string>();
    for (const auto& [name, value] : options) {
      if (s == name) { out = value; return; }
    }
    fail(key, "unknown value \"" + s + "\"; expected one of: " + allowed);
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    const Json* v = find(key);
    if (v == nullptr) return;
    if (!v->is_array()) fail(key, "expected an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) fail(key + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back((*v)[i].get<double>());
    }
  }

  // Rejects keys that were never read.
  void finish() const {
    if (obj_ == nullptr) return;
    for (const auto& [key, value] : obj_->items()) {
      if (!used_.contains(key)) fail(key, "unknown field");
    }
  }

private:
  const Json* obj_;
  std::string path_;
  std::set<std::string> used_;
};

void read_room(Section s, RoomSpec& room) {
  s.number("length", room.length);
  s.number("width", room.width);
  s.number("height", room.height);
  s.number("t60", room.t60);
  s.choice("absorption", room.absorption,
           {{"sabine", AbsorptionModel::Sabine},
            {"eyring", AbsorptionModel::Eyring},
            {"calibrated", AbsorptionModel::Calibrated}});
  s.finish();
  if (!(room.length > 0.0)) s.fail("length", "must be > 0");
  if (!(room.width > 0.0)) s.fail("width", "must be > 0");
  if (!(room.height > 0.0)) s.fail("height", "must be > 0");
  if (!(room.t60 >= 0.0)) s.fail("t60", "must be >= 0");
}

Pose read_pose(Section s) {
  double x = 0.0, y = 0.0, heading_deg = 0.0;
  if (s.find("x") == nullptr) s.fail("x", "required");
  if (s.find("y") == nullptr) s.fail("y", "required");
  s.number("x", x);
  s.number("y", y);
  s.number("heading_deg", heading_deg);
  s.finish();
  return {x, y, heading_deg * kDeg};
}

void check_pose(const Pose& p, const RoomSpec& room, double clearance, const std::string& field) {
  if (!(p.x > clearance && p.x < room.length - clearance && p.y > clearance &&
        p.y < room.width - clearance))
    throw ConfigError(field + ": pose must lie inside the room with clearance > array.radius");
}

template <typename F>
void rethrow_as_config(F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

const char* absorption_name(AbsorptionModel m) {
  switch (m) {
    case AbsorptionModel::Sabine: return "sabine";
    case AbsorptionModel::Eyring: return "eyring";
    case AbsorptionModel::Calibrated: break;
  }
  return "calibrated";
}

Json room_json(const RoomSpec& r) {
  return {{"length", r.length}, {"width", r.width}, {"height", r.height}, {"t60", r.t60},
          {"absorption", absorption_name(r.absorption)}};
}

Json pose_json(const Pose& p) {
  return {{"x", p.x}, {"y", p.y}, {"heading_deg", p.heading / kDeg}};
}

Json db_json(double v) { return std::isinf(v) ? Json("inf") : Json(v); }

void sync(ScenarioConfig& c) {
  const auto& g = c.pipeline.geom;
  for (RoomSpec* r : {&c.room, &c.classifier.dataset.room, &c.map.room}) {
    r->sample_rate = g.sample_rate;
    r->speed_of_sound = g.speed_of_sound;
  }
  c.pipeline.toa.sample_rate = g.sample_rate;
  c.pipeline.toa.speed_of_sound = g.speed_of_sound;
  const bool diffuse = c.classifier.dataset.noise.include_diffuse;
  c.classifier.dataset.noise = c.noise;
  c.classifier.dataset.noise.include_diffuse = diffuse;
}

}  // namespace

ScenarioConfig::ScenarioConfig() {
  noise.snr_db = 10.0;
  classifier.dataset.room = RoomSpec{10.0, 8.0, 7.0};
  sync(*this);
}

Trajectory MapConfig::trajectory() const {
  if (!poses.empty()) return Trajectory{poses, 1.0};
  return wall_following(room, margins, spacing);
}

ProbeSignal ScenarioConfig::probe_signal() const {
  return generate_probe(probe.active_len, probe.total_len, pipeline.geom.sample_rate, probe.seed);
}

NoiseModel ScenarioConfig::sim_noise() const {
  NoiseModel n = noise;
  n.seed = mix_seed(seed, 1);
  return n;
}

NoiseModel ScenarioConfig::map_noise() const {
  NoiseModel n = noise;
  n.seed = mix_seed(seed, 3);
  return n;
}

TrainingProtocol ScenarioConfig::training_protocol() const {
  TrainingProtocol p;
  p.dataset = classifier.dataset;
  p.dataset.seed = mix_seed(seed, 2, 0);
  p.train_ratio = classifier.train_ratio;
  p.folds = classifier.folds;
  p.c_grid = classifier.c_grid;
  p.width_grid = classifier.width_grid;
  p.split_seed = mix_seed(seed, 2, 1);
  p.cv_seed = mix_seed(seed, 2, 2);
  return p;
}

ExperimentSpec ScenarioConfig::experiment_spec(SweepVariable variable) const {
  ExperimentSpec s;
  s.room = room;
  s.pose = pose;
  s.pipeline = pipeline;
  s.noise = noise;
  s.welch = welch;
  s.probe_active_len = probe.active_len;
  s.probe_total_len = probe.total_len;
  s.probe_seed = probe.seed;
  s.variable = variable;
  if (variable == SweepVariable::SnrDb) {
    s.values = experiment.snr_values;
  } else {
    s.values = experiment.t60_values;
    s.noise.snr_db = experiment.fixed_snr_db;
  }
  s.trials = experiment.trials;
  s.seed = seed;
  s.tolerance = experiment.tolerance;
  return s;
}

void ScenarioConfig::validate() const {
  if (version != kConfigVersion)
    throw ConfigError("version: unsupported value " + std::to_string(version) + " (expected " +
                      std::to_string(kConfigVersion) + ")");
  rethrow_as_config([&] {
    pipeline.geom.validate();
    room.validate();
    noise.validate();
  });
  if (probe.active_len == 0) throw ConfigError("probe.active_len: must be > 0");
  if (probe.total_len < probe.active_len) throw ConfigError("probe.total_len: must be >= probe.active_len");
  rethrow_as_config([&] {
    pipeline.validate(probe.total_len);
    if (welch.segment_len < 2 || welch.hop == 0 || welch.hop > welch.segment_len)
      throw std::invalid_argument("welch.hop: must be in (0, segment_len] with segment_len >= 2");
    if (welch.segment_len > probe.total_len)
      throw std::invalid_argument("welch.segment_len: longer than probe.total_len");
    if (!(welch.reg >= 0.0)) throw std::invalid_argument("welch.reg: must be >= 0");
  });
  if (pipeline.doa.frame_len > probe.total_len)
    throw ConfigError("beam.frame_len: longer than probe.total_len");
  const double r = pipeline.geom.radius;
  check_pose(pose, room, r, "pose");
  const double z = pipeline.array_height;
  if (z >= 0.0 && !(z > r && z < std::min({room.height, map.room.height, classifier.dataset.room.height}) - r))
    throw ConfigError("simulation.array_height: must leave clearance > array.radius in every room");

  rethrow_as_config([&] {
    classifier.dataset.validate(pipeline.geom);
  });
  if (!(classifier.train_ratio > 0.0 && classifier.train_ratio < 1.0))
    throw ConfigError("classifier.train_ratio: must lie in (0, 1)");
  if (classifier.folds < 2) throw ConfigError("classifier.folds: must be >= 2");
  if (classifier.c_grid.empty()) throw ConfigError("classifier.c_grid: must be nonempty");
  if (classifier.width_grid.empty()) throw ConfigError("classifier.width_grid: must be nonempty");
  for (double v : classifier.c_grid)
    if (!(v > 0.0)) throw ConfigError("classifier.c_grid: values must be > 0");
  for (double v : classifier.width_grid)
    if (!(v > 0.0)) throw ConfigError("classifier.width_grid: values must be > 0");

  if (!(map.tolerance_m >= 0.0)) throw ConfigError("map.tolerance_m: must be >= 0");
  if (map.poses.empty()) {
    if (!(map.spacing > 0.0)) throw ConfigError("map.spacing: must be > 0");
    if (map.margins.empty()) throw ConfigError("map.margins: must be nonempty");
    for (double m : map.margins) {
      if (!(m > r) || 2.0 * m >= map.room.length || 2.0 * m >= map.room.width)
        throw ConfigError("map.margins: each margin must exceed array.radius and fit in map.room");
    }
  } else {
    for (std::size_t i = 0; i < map.poses.size(); ++i)
      check_pose(map.poses[i], map.room, r, "map.poses[" + std::to_string(i) + "]");
  }

  if (experiment.trials < 1) throw ConfigError("experiment.trials: must be >= 1");
  if (experiment.snr_values.empty()) throw ConfigError("experiment.snr_values: must be nonempty");
  if (experiment.t60_values.empty()) throw ConfigError("experiment.t60_values: must be nonempty");
  for (double v : experiment.t60_values)
    if (!(v >= 0.0)) throw ConfigError("experiment.t60_values: values must be >= 0");
  if (!(experiment.tolerance.toa_samples > 0.0))
    throw ConfigError("experiment.toa_tol_samples: must be > 0");
  if (!(experiment.tolerance.doa_steps > 0.0))
    throw ConfigError("experiment.doa_tol_steps: must be > 0");
}

ScenarioConfig parse_config(const Json& doc) {
  ScenarioConfig c;
  Section top(&doc, "");
  const Json* version = top.find("version");
  if (version == nullptr) throw ConfigError("version: required");
  if (!version->is_number_integer()) throw ConfigError("version: expected an integer");
  c.version = version->get<int>();
  if (c.version != kConfigVersion) c.validate();
  top.integer("seed", c.seed);

  read_room(top.child("room"), c.room);

  {
    auto s = top.child("array");
    auto& g = c.pipeline.geom;
    double offset_deg = g.offset_angle / kDeg;
    s.integer("mic_count", g.mic_count);
    s.number("radius", g.radius);
    s.number("offset_angle_deg", offset_deg);
    s.integer("reference_index", g.reference_index);
    s.number("sample_rate", g.sample_rate);
    s.number("speed_of_sound", g.speed_of_sound);
    s.finish();
    g.offset_angle = offset_deg * kDeg;
    if (g.mic_count < 2) s.fail("mic_count", "must be >= 2");
    if (!(g.radius > 0.0)) s.fail("radius", "must be > 0");
    if (!(g.sample_rate > 0.0)) s.fail("sample_rate", "must be > 0");
    if (!(g.speed_of_sound > 0.0)) s.fail("speed_of_sound", "must be > 0");
    if (g.reference_index < 0 || g.reference_index >= g.mic_count)
      s.fail("reference_index", "must lie in [0, mic_count)");
  }

  if (auto s = top.child("pose"); s.present()) c.pose = read_pose(s);

  {
    auto s = top.child("probe");
    s.integer("active_len", c.probe.active_len);
    s.integer("total_len", c.probe.total_len);
    s.integer("seed", c.probe.seed);
    s.finish();
  }

  {
    auto s = top.child("noise");
    s.number("snr_db", c.noise.snr_db, true);
    s.number("sdnr_db", c.noise.sdnr_db, true);
    s.number("rotor_rps", c.noise.rotor_rps);
    s.boolean("include_diffuse", c.noise.include_diffuse);
    s.choice("snr_reference", c.noise.snr_reference,
             {{"reverberant", NoiseModel::SnrReference::Reverberant},
              {"reflections", NoiseModel::SnrReference::Reflections}});
    s.finish();
    if (!(c.noise.rotor_rps > 0.0)) s.fail("rotor_rps", "must be > 0");
  }

  {
    auto s = top.child("estimator");
    auto& t = c.pipeline.toa;
    s.integer("dft_len", t.dft_len);
    s.number("search_min_m", t.search_min_m);
    s.number("search_max_m", t.search_max_m);
    s.number("grid_step", t.grid_step);
    s.choice("range_mode", t.range_mode,
             {{"round_trip", RangeMode::RoundTrip}, {"path_length", RangeMode::PathLength}});
    s.boolean("subsample_refine", t.subsample_refine);
    s.finish();
    if (!(t.search_min_m > 0.0)) s.fail("search_min_m", "must be > 0");
    if (!(t.search_max_m > t.search_min_m)) s.fail("search_max_m", "must exceed search_min_m");
  }

  {
    auto s = top.child("beam");
    auto& d = c.pipeline.doa;
    double step_deg = d.grid.azimuth_step / kDeg;
    double elev_deg = d.grid.elevation / kDeg;
    s.integer("frame_len", d.frame_len);
    s.integer("hop", d.hop);
    s.number("gamma", d.gamma);
    s.number("azimuth_step_deg", step_deg);
    s.number("elevation_deg", elev_deg);
    s.number("band_low_hz", d.grid.band_low_hz);
    s.number("band_high_hz", d.grid.band_high_hz);
    s.finish();
    d.grid.azimuth_step = step_deg * kDeg;
    d.grid.elevation = elev_deg * kDeg;
    if (2 * d.hop != d.frame_len) s.fail("hop", "must equal frame_len / 2");
  }

  {
    auto s = top.child("simulation");
    s.integer("rir_length", c.pipeline.rir_length);
    s.number("array_height", c.pipeline.array_height);
    s.boolean("remove_direct", c.pipeline.remove_direct);
    s.finish();
    if (c.pipeline.rir_length == 0) s.fail("rir_length", "must be > 0");
  }

  {
    auto s = top.child("welch");
    s.integer("segment_len", c.welch.segment_len);
    s.integer("hop", c.welch.hop);
    s.number("reg", c.welch.reg);
    s.finish();
  }

  {
    auto s = top.child("classifier");
    auto& d = c.classifier.dataset;
    read_room(s.child("room"), d.room);
    s.integer("grid_points", d.grid_points);
    s.number("snr_min_db", d.snr_min_db);
    s.number("snr_max_db", d.snr_max_db);
    s.number("margin", d.margin);
    s.boolean("include_diffuse", d.noise.include_diffuse);
    s.number("train_ratio", c.classifier.train_ratio);
    s.integer("folds", c.classifier.folds);
    s.numbers("c_grid", c.classifier.c_grid);
    s.numbers("width_grid", c.classifier.width_grid);
    s.finish();
    if (d.grid_points == 0) s.fail("grid_points", "must be > 0");
    if (d.snr_min_db > d.snr_max_db) s.fail("snr_max_db", "must be >= snr_min_db");
  }

  {
    auto s = top.child("map");
    read_room(s.child("room"), c.map.room);
    if (const Json* poses = s.find("poses"); poses != nullptr) {
      if (!poses->is_array()) s.fail("poses", "expected an array of poses");
      for (std::size_t i = 0; i < poses->size(); ++i)
        c.map.poses.push_back(read_pose(Section(&(*poses)[i], s.field("poses[" + std::to_string(i) + "]"))));
    }
    s.numbers("margins", c.map.margins);
    s.number("spacing", c.map.spacing);
    s.number("tolerance_m", c.map.tolerance_m);
    s.finish();
  }

  {
    auto s = top.child("experiment");
    auto& e = c.experiment;
    s.numbers("snr_values", e.snr_values);
    s.numbers("t60_values", e.t60_values);
    s.integer("trials", e.trials);
    s.number("fixed_snr_db", e.fixed_snr_db);
    s.number("toa_tol_samples", e.tolerance.toa_samples);
    s.number("doa_tol_steps", e.tolerance.doa_steps);
    s.finish();
  }

  top.finish();
  sync(c);
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

Json to_json(const ScenarioConfig& c) {
  const auto& g = c.pipeline.geom;
  const auto& t = c.pipeline.toa;
  const auto& d = c.pipeline.doa;
  Json map_poses = Json::array();
  for (const auto& p : c.map.poses) map_poses.push_back(pose_json(p));
  Json doc;
  doc["version"] = c.version;
  doc["seed"] = c.seed;
  doc["room"] = room_json(c.room);
  doc["array"] = {{"mic_count", g.mic_count},
                  {"radius", g.radius},
                  {"offset_angle_deg", g.offset_angle / kDeg},
                  {"reference_index", g.reference_index},
                  {"sample_rate", g.sample_rate},
                  {"speed_of_sound", g.speed_of_sound}};
  doc["pose"] = pose_json(c.pose);
  doc["probe"] = {{"active_len", c.probe.active_len}, {"total_len", c.probe.total_len}, {"seed", c.probe.seed}};
  doc["noise"] = {{"snr_db", db_json(c.noise.snr_db)},
                  {"sdnr_db", db_json(c.noise.sdnr_db)},
                  {"rotor_rps", c.noise.rotor_rps},
                  {"include_diffuse", c.noise.include_diffuse},
                  {"snr_reference", c.noise.snr_reference == NoiseModel::SnrReference::Reverberant
                                        ? "reverberant"
                                        : "reflections"}};
  doc["estimator"] = {{"dft_len", t.dft_len},
                      {"search_min_m", t.search_min_m},
                      {"search_max_m", t.search_max_m},
                      {"grid_step", t.grid_step},
                      {"range_mode", t.range_mode == RangeMode::RoundTrip ? "round_trip" : "path_length"},
                      {"subsample_refine", t.subsample_refine}};
  doc["beam"] = {{"frame_len", d.frame_len},
                 {"hop", d.hop},
                 {"gamma", d.gamma},
                 {"azimuth_step_deg", d.grid.azimuth_step / kDeg},
                 {"elevation_deg", d.grid.elevation / kDeg},
                 {"band_low_hz", d.grid.band_low_hz},
                 {"band_high_hz", d.grid.band_high_hz}};
  doc["simulation"] = {{"rir_length", c.pipeline.rir_length},
                       {"array_height", c.pipeline.array_height},
                       {"remove_direct", c.pipeline.remove_direct}};
  doc["welch"] = {{"segment_len", c.welch.segment_len}, {"hop", c.welch.hop}, {"reg", c.welch.reg}};
  const auto& ds = c.classifier.dataset;
  doc["classifier"] = {{"room", room_json(ds.room)},
                       {"grid_points", ds.grid_points},
                       {"snr_min_db", ds.snr_min_db},
                       {"snr_max_db", ds.snr_max_db},
                       {"margin", ds.margin},
                       {"include_diffuse", ds.noise.include_diffuse},
                       {"train_ratio", c.classifier.train_ratio},
                       {"folds", c.classifier.folds},
                       {"c_grid", c.classifier.c_grid},
                       {"width_grid", c.classifier.width_grid}};
  doc["map"] = {{"room", room_json(c.map.room)},
                {"poses", map_poses},
                {"margins", c.map.margins},
                {"spacing", c.map.spacing},
                {"tolerance_m", c.map.tolerance_m}};
  doc["experiment"] = {{"snr_values", c.experiment.snr_values},
                       {"t60_values", c.experiment.t60_values},
                       {"trials", c.experiment.trials},
                       {"fixed_snr_db", c.experiment.fixed_snr_db},
                       {"toa_tol_samples", c.experiment.tolerance.toa_samples},
                       {"doa_tol_steps", c.experiment.tolerance.doa_steps}};
  return doc;
}

}  // namespace echomap
