// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "commands.hpp"

#include "echomap/baseline.hpp"
#include "echomap/config.hpp"
#include "echomap/eval.hpp"
#include "echomap/io.hpp"
#include "echomap/mapper.hpp"
#include "echomap/training.hpp"

#include <iostream>
#include <vector>

namespace echomap::cli {

namespace {

namespace fs = std::filesystem;

ScenarioConfig load(const CommonOptions& opt) {
  auto cfg = load_config(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.jobs < 1) throw ConfigError("--jobs: must be >= 1");
  return cfg;
}

// Records the command, seed and normalized config next to the outputs.
void write_manifest(const CommonOptions& opt, const ScenarioConfig& cfg, const std::string& command,
                    const std::vector<std::string>& outputs, Json extra = Json::object()) {
  Json m;
  m["tool"] = "echomap";
  m["version"] = kToolVersion;
  m["command"] = command;
  m["config_file"] = opt.config.filename().string();
  m["seed"] = cfg.seed;
  m["config"] = to_json(cfg);
  m["outputs"] = outputs;
  for (auto& [k, v] : extra.items()) m[k] = v;
  write_json(opt.out / "manifest.json", m);
}

Json echo_json(const WallEcho& e) {
  static const char* names[] = {"x_min", "x_max", "y_min", "y_max"};
  return {{"wall", names[static_cast<int>(e.wall)]},
          {"tau_samples", e.tau},
          {"azimuth_deg", e.azimuth * 180.0 / 3.14159265358979323846},
          {"range_m", e.range}};
}

}  // namespace

void cmd_sim(const CommonOptions& opt) {
  const auto cfg = load(opt);
  const auto probe = cfg.probe_signal();
  const auto rirs = pose_rirs(cfg.pose, cfg.room, cfg.pipeline);
  const auto rec = render_observation(rirs, probe, cfg.sim_noise(), cfg.pipeline.geom);

  MultichannelRecording rir_rec{rirs.responses, rirs.sample_rate};
  MultichannelRecording probe_rec{{probe.samples}, probe.sample_rate};
  write_wav(opt.out / "recording.wav", rec);
  write_raw_f32(opt.out / "recording.f32", rec);
  write_wav(opt.out / "rir.wav", rir_rec);
  write_wav(opt.out / "probe.wav", probe_rec);

  Json truth = Json::array();
  for (const auto& e : lateral_wall_echoes(cfg.pose, cfg.room, cfg.pipeline)) truth.push_back(echo_json(e));
  write_json(opt.out / "truth.json", {{"lateral_wall_echoes", truth}});
  write_manifest(opt, cfg, "sim",
                 {"recording.wav", "recording.f32", "recording.f32.json", "rir.wav", "probe.wav",
                  "truth.json"});
  std::cout << "wrote " << rec.channel_count() << "-channel recording of " << rec.length()
            << " samples to " << opt.out.string() << "\n";
}

void cmd_estimate(const CommonOptions& opt, const fs::path& recording) {
  const auto cfg = load(opt);
  const auto probe = cfg.probe_signal();
  auto rec = read_recording(recording);
  if (std::abs(rec.sample_rate - cfg.pipeline.geom.sample_rate) > 1e-6)
    throw ConfigError("array.sample_rate: does not match the recording (" +
                      format_number(rec.sample_rate) + " Hz)");
  if (static_cast<int>(rec.channel_count()) != cfg.pipeline.geom.mic_count)
    throw ConfigError("array.mic_count: does not match the recording (" +
                      std::to_string(rec.channel_count()) + " channels)");
  if (rec.length() > cfg.pipeline.toa.dft_len)
    throw ConfigError("estimator.dft_len: shorter than the recording");
  if (cfg.pipeline.remove_direct) rec = direct_path_removal(rec, cfg.pipeline.geom, probe);
  const auto est = estimate_echo(rec, probe, cfg.pipeline);
  const auto& g = cfg.pipeline.geom;

  Json doc;
  doc["toa"] = to_json(est.toa, g.sample_rate, g.speed_of_sound);
  doc["doa"] = to_json(est.srp.best);
  doc["feature"] = to_json(est.feature);
  write_json(opt.out / "estimates.json", doc);
  write_text(opt.out / "srp.csv", srp_csv(est.srp));
  write_manifest(opt, cfg, "estimate", {"estimates.json", "srp.csv"},
                 {{"recording", recording.filename().string()}});
  std::cout << doc.dump(2) << "\n";
}

void cmd_train(const CommonOptions& opt) {
  const auto cfg = load(opt);
  const auto res = run_training(cfg.training_protocol(), cfg.probe_signal(), cfg.pipeline, opt.jobs);
  std::size_t walls = 0;
  for (const auto& s : res.dataset) walls += s.label == EchoClass::Wall;

  write_text(opt.out / "dataset.csv", dataset_csv(res.dataset));
  write_text(opt.out / "cv.csv", cv_csv(res.cv));
  write_json(opt.out / "model.json", to_json(res.model));
  Json report{{"dataset_size", res.dataset.size()},
              {"wall_samples", walls},
              {"no_wall_samples", res.dataset.size() - walls},
              {"train_size", res.train.size()},
              {"test_size", res.test.size()},
              {"folds", cfg.classifier.folds},
              {"best_c", res.cv.best_c},
              {"best_rbf_width", res.cv.best_width},
              {"cv_accuracy", res.cv.cv_accuracy},
              {"train_accuracy", res.train_accuracy},
              {"test_accuracy", res.test_accuracy},
              {"support_vectors", res.model.support_vectors.size()}};
  write_json(opt.out / "report.json", report);
  write_manifest(opt, cfg, "train", {"dataset.csv", "cv.csv", "model.json", "report.json"});
  std::cout << report.dump(2) << "\n";
}

void cmd_map(const CommonOptions& opt, const std::optional<fs::path>& model_path) {
  const auto cfg = load(opt);
  std::optional<SvmModel> model;
  if (model_path) model = svm_from_json(read_json(*model_path));
  const auto traj = cfg.map.trajectory();
  const auto raw = build_map(traj, cfg.map.room, cfg.probe_signal(), cfg.map_noise(), cfg.pipeline,
                             nullptr, opt.jobs);
  const auto filtered = apply_classifier(raw, model ? &*model : nullptr);

  std::vector<std::string> outputs{"map.csv", "map.svg", "metrics.json"};
  write_text(opt.out / "map.csv", map_csv(filtered));
  write_text(opt.out / "map.svg", map_svg(filtered));
  Json metrics{{"tolerance_m", cfg.map.tolerance_m},
               {"poses", traj.poses.size()},
               {"unfiltered", to_json(map_metrics(raw, cfg.map.tolerance_m))}};
  if (model) {
    metrics["filtered"] = to_json(map_metrics(filtered, cfg.map.tolerance_m));
    write_text(opt.out / "map_unfiltered.svg", map_svg(raw));
    outputs.push_back("map_unfiltered.svg");
  }
  write_json(opt.out / "metrics.json", metrics);
  Json extra = Json::object();
  if (model_path) extra["model"] = model_path->filename().string();
  write_manifest(opt, cfg, "map", outputs, extra);
  std::cout << metrics.dump(2) << "\n";
}

void cmd_eval(const CommonOptions& opt, const std::string& sweep) {
  const auto cfg = load(opt);
  const SweepVariable var = sweep == "snr" ? SweepVariable::SnrDb : SweepVariable::T60;
  const auto res = run_sweep(cfg.experiment_spec(var), opt.jobs);
  const std::string stem = "curve_" + sweep;
  write_text(opt.out / (stem + ".csv"), curve_csv(res.curve));
  write_text(opt.out / (stem + ".svg"), curve_svg(res.curve));
  write_text(opt.out / ("trials_" + sweep + ".csv"), trials_csv(res.records));
  write_manifest(opt, cfg, "eval", {stem + ".csv", stem + ".svg", "trials_" + sweep + ".csv"},
                 {{"sweep", sweep}, {"curve", to_json(res.curve)}});
  std::cout << curve_csv(res.curve);
}

void cmd_time(const CommonOptions& opt) {
  const auto cfg = load(opt);
  auto spec = cfg.experiment_spec(SweepVariable::SnrDb);
  const auto rep = time_methods(spec);
  Json doc{{"machine", rep.machine},
           {"trials", rep.trials},
           {"snls_mean_s", rep.snls_mean_s},
           {"baseline_mean_s", rep.baseline_mean_s},
           {"baseline_faster", rep.baseline_mean_s < rep.snls_mean_s}};
  write_json(opt.out / "timing.json", doc);
  write_manifest(opt, cfg, "time", {"timing.json"});
  std::cout << doc.dump(2) << "\n";
}

}  // namespace echomap::cli
