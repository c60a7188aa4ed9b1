// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "commands.hpp"

#include "echomap/config.hpp"
#include "echomap/doa.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void add_common(CLI::App* cmd, echomap::cli::CommonOptions& opt, bool with_jobs) {
  cmd->add_option("--config", opt.config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", opt.seed, "Override the config seed");
  if (with_jobs) cmd->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", opt.out, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = echomap::cli;
  CLI::App app{"Acoustic echo mapping toolkit: simulation, TOA/DOA estimation, echo classification"};
  app.set_version_flag("--version", cli::kToolVersion);
  app.require_subcommand(1);

  cli::CommonOptions opt;
  std::filesystem::path recording;
  std::optional<std::filesystem::path> model;
  std::string sweep = "snr";

  auto* sim = app.add_subcommand("sim", "Render a noisy multichannel recording at the configured pose");
  add_common(sim, opt, false);

  auto* estimate = app.add_subcommand("estimate", "Estimate TOA, DOA and features from a recording");
  add_common(estimate, opt, false);
  estimate->add_option("--recording", recording, "WAV or raw float32 recording")
      ->required()
      ->check(CLI::ExistingFile);

  auto* train = app.add_subcommand("train", "Generate the grid dataset and train the echo classifier");
  add_common(train, opt, true);

  auto* map = app.add_subcommand("map", "Build a spatial map along the configured trajectory");
  add_common(map, opt, true);
  map->add_option("--model", model, "Classifier model JSON")->check(CLI::ExistingFile);

  auto* eval = app.add_subcommand("eval", "Run a Monte-Carlo accuracy sweep");
  add_common(eval, opt, true);
  eval->add_option("--sweep", sweep, "Swept variable")->check(CLI::IsMember({"snr", "t60"}));

  auto* time = app.add_subcommand("time", "Report mean per-trial run time of both TOA methods");
  add_common(time, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sim->parsed()) cli::cmd_sim(opt);
    else if (estimate->parsed()) cli::cmd_estimate(opt, recording);
    else if (train->parsed()) cli::cmd_train(opt);
    else if (map->parsed()) cli::cmd_map(opt, model);
    else if (eval->parsed()) cli::cmd_eval(opt, sweep);
    else if (time->parsed()) cli::cmd_time(opt);
  } catch (const echomap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const echomap::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
