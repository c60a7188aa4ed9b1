// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/pipeline.hpp"

#include "echomap/parallel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace echomap {

void PipelineConfig::validate(std::size_t observation_len) const {
  geom.validate();
  toa.validate(observation_len);
  doa.validate(geom.sample_rate);
  if (rir_length == 0) throw std::invalid_argument("simulation.rir_length: must be > 0");
  if (std::abs(toa.sample_rate - geom.sample_rate) > 1e-9)
    throw std::invalid_argument("estimator.sample_rate: must equal geometry.sample_rate");
  if (std::abs(toa.speed_of_sound - geom.speed_of_sound) > 1e-9)
    throw std::invalid_argument("estimator.speed_of_sound: must equal geometry.speed_of_sound");
}

Vec3 array_center(const Pose& pose, const RoomSpec& room, const PipelineConfig& cfg) {
  const double z = cfg.array_height < 0.0 ? 0.5 * room.height : cfg.array_height;
  return {pose.x, pose.y, z};
}

std::vector<WallEcho> lateral_wall_echoes(const Pose& pose, const RoomSpec& room,
                                          const PipelineConfig& cfg) {
  const Vec3 c = array_center(pose, room, cfg);
  const auto mics = mic_positions(cfg.geom, c, pose.heading);
  const Vec3& ref = mics[static_cast<std::size_t>(cfg.geom.reference_index)];
  const double k = cfg.geom.sample_rate / cfg.geom.speed_of_sound;

  const Vec3 images[4] = {{-c.x, c.y, c.z},
                          {2.0 * room.length - c.x, c.y, c.z},
                          {c.x, -c.y, c.z},
                          {c.x, 2.0 * room.width - c.y, c.z}};
  const double ranges[4] = {c.x, room.length - c.x, c.y, room.width - c.y};
  std::vector<WallEcho> out;
  for (int w = 0; w < 4; ++w) {
    const Vec3& img = images[w];
    WallEcho e;
    e.wall = static_cast<Wall>(w);
    e.tau = distance(img, ref) * k;
    e.azimuth = wrap_angle(std::atan2(img.y - c.y, img.x - c.x) - pose.heading);
    e.range = ranges[w];
    out.push_back(e);
  }
  return out;
}

const WallEcho& closest_echo(const std::vector<WallEcho>& echoes, double tau) {
  if (echoes.empty()) throw std::invalid_argument("closest_echo: no echoes");
  std::size_t best = 0;
  for (std::size_t i = 1; i < echoes.size(); ++i) {
    if (std::abs(echoes[i].tau - tau) < std::abs(echoes[best].tau - tau)) best = i;
  }
  return echoes[best];
}

RirSet pose_rirs(const Pose& pose, const RoomSpec& room, const PipelineConfig& cfg) {
  room.validate();
  cfg.geom.validate();
  const Vec3 c = array_center(pose, room, cfg);
  if (!room.contains(c, cfg.geom.radius))
    throw std::invalid_argument("pose: array must lie inside the room with clearance > radius");
  return simulate_rir(room, c, mic_positions(cfg.geom, c, pose.heading), cfg.rir_length);
}

MultichannelRecording observe(const RirSet& rirs, const ProbeSignal& probe,
                              const NoiseModel& noise, const PipelineConfig& cfg) {
  auto rec = render_observation(rirs, probe, noise, cfg.geom);
  if (cfg.remove_direct) rec = direct_path_removal(rec, cfg.geom, probe);
  return rec;
}

PoseProbe estimate_echo(const MultichannelRecording& rec, const ProbeSignal& probe,
                        const PipelineConfig& cfg) {
  rec.validate();
  if (static_cast<int>(rec.channel_count()) != cfg.geom.mic_count)
    throw std::invalid_argument("recording: channel count does not match geometry.mic_count");
  const auto& ref = rec.channels[static_cast<std::size_t>(cfg.geom.reference_index)];
  PoseProbe out;
  out.toa = estimate_toa(ref, probe, cfg.toa);
  out.srp = estimate_doa(rec, cfg.geom, out.toa.tau, probe.active_len, cfg.doa);
  out.feature = {out.toa.tau, out.srp.best.power};
  return out;
}

PoseProbe probe_at_pose(const Pose& pose, const RoomSpec& room, const ProbeSignal& probe,
                        const NoiseModel& noise, const PipelineConfig& cfg) {
  cfg.validate(probe.samples.size());
  return estimate_echo(observe(pose_rirs(pose, room, cfg), probe, noise, cfg), probe, cfg);
}

void DatasetConfig::validate(const ArrayGeometry& geom) const {
  room.validate();
  noise.validate();
  if (grid_points == 0) throw std::invalid_argument("classifier.grid_points: must be > 0");
  if (!(snr_min_db <= snr_max_db) || !std::isfinite(snr_min_db) || !std::isfinite(snr_max_db))
    throw std::invalid_argument("classifier.snr_range_db: need finite min <= max");
  if (!(margin > geom.radius))
    throw std::invalid_argument("classifier.margin: must exceed the array radius");
  if (2.0 * margin >= room.length || 2.0 * margin >= room.width)
    throw std::invalid_argument("classifier.margin: grid does not fit in the room");
}

std::vector<Pose> grid_poses(const RoomSpec& room, std::size_t n, double margin) {
  if (n == 0) throw std::invalid_argument("grid_poses: need at least one point");
  const double lx = room.length - 2.0 * margin;
  const double ly = room.width - 2.0 * margin;
  if (!(lx > 0.0 && ly > 0.0)) throw std::invalid_argument("grid_poses: margin too large");
  const double target = std::log(lx / ly);
  std::size_t nx = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 1; a <= n; ++a) {
    if (n % a != 0) continue;
    const double err = std::abs(std::log(static_cast<double>(a) / static_cast<double>(n / a)) - target);
    if (err < best) {
      best = err;
      nx = a;
    }
  }
  const std::size_t ny = n / nx;
  std::vector<Pose> poses;
  poses.reserve(n);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      poses.emplace_back(margin + (static_cast<double>(i) + 0.5) * lx / static_cast<double>(nx),
                         margin + (static_cast<double>(j) + 0.5) * ly / static_cast<double>(ny), 0.0);
    }
  }
  return poses;
}

std::vector<LabeledSample> generate_dataset(const DatasetConfig& dcfg, const ProbeSignal& probe,
                                            const PipelineConfig& cfg, int jobs) {
  dcfg.validate(cfg.geom);
  cfg.validate(probe.samples.size());
  const auto poses = grid_poses(dcfg.room, dcfg.grid_points, dcfg.margin);
  std::vector<LabeledSample> out(poses.size());
  parallel_for(poses.size(), jobs, [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(dcfg.seed, i, 1));
    std::uniform_real_distribution<double> snr(dcfg.snr_min_db, dcfg.snr_max_db);
    NoiseModel noise = dcfg.noise;
    noise.snr_db = snr(rng);
    noise.seed = mix_seed(dcfg.seed, i, 2);
    const auto res = probe_at_pose(poses[i], dcfg.room, probe, noise, cfg);
    const auto echoes = lateral_wall_echoes(poses[i], dcfg.room, cfg);
    const auto& truth = closest_echo(echoes, res.toa.tau);
    out[i] = {res.feature, label_for(res.toa.tau, truth.tau), truth.tau};
  });
  return out;
}

}  // namespace echomap
