// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "echomap/config.hpp"
#include "echomap/eval.hpp"
#include "echomap/io.hpp"
#include "echomap/mapper.hpp"
#include "echomap/training.hpp"

#include <CLI11.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <regex>
#include <sstream>
#include <thread>

using namespace echomap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
  return buf;
}

std::string num(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double at(const AccuracyCurve& c, const std::vector<double>& acc, double value) {
  const auto it = std::find(c.values.begin(), c.values.end(), value);
  if (it == c.values.end()) throw std::runtime_error("sweep value missing: " + num(value, 1));
  return acc[static_cast<std::size_t>(it - c.values.begin())];
}

int shell(const std::string& cmd, std::string* output = nullptr) {
  std::string full = cmd + " 2>&1";
  FILE* pipe = popen(full.c_str(), "r");
  if (pipe == nullptr) return -1;
  std::string text;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), n);
  const int status = pclose(pipe);
  if (output != nullptr) *output = std::move(text);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const fs::path& p) { return "\"" + p.string() + "\""; }

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream f(e.path(), std::ios::binary);
    out[fs::relative(e.path(), dir).string()].assign(std::istreambuf_iterator<char>(f), {});
  }
  return out;
}

// Criteria 1, 2 and 4 share one SNR sweep.
Outcome snr_reproduction(const SweepResult& r) {
  const auto& c = r.curve;
  const auto& snls = c.method("snls").toa_accuracy;
  const double low = at(c, snls, -10.0);
  const double high = at(c, snls, 40.0);
  return {low >= 0.70 && high >= 0.95,
          "S-NLS TOA accuracy " + pct(low) + " at -10 dB (need >= 70%), " + pct(high) +
              " at +40 dB (need >= 95%)"};
}

Outcome baseline_ordering(const SweepResult& r) {
  const auto& c = r.curve;
  const double snls = at(c, c.method("snls").toa_accuracy, -10.0);
  const double base = at(c, c.method("baseline").toa_accuracy, -10.0);
  return {base < snls, "at -10 dB peak picking " + pct(base) + " vs S-NLS " + pct(snls)};
}

Outcome doa_high_snr(const SweepResult& r) {
  const auto& c = r.curve;
  const double a30 = at(c, c.method("snls").doa_accuracy, 30.0);
  const double alow = at(c, c.method("snls").doa_accuracy, -10.0);
  return {a30 >= 0.80, "SRP azimuth within 5 deg in " + pct(a30) + " of trials at 30 dB (need >= 80%); " +
                           pct(alow) + " at -10 dB (not asserted)"};
}

Outcome t60_flatness(const SweepResult& r) {
  const auto& acc = r.curve.method("snls").toa_accuracy;
  const auto [lo, hi] = std::minmax_element(acc.begin(), acc.end());
  std::string values;
  for (std::size_t i = 0; i < acc.size(); ++i)
    values += (i ? ", " : "") + num(r.curve.values[i], 1) + " s: " + pct(acc[i]);
  return {*hi - *lo <= 0.15 + 1e-12, "spread " + pct(*hi - *lo) + " (need <= 15%) over " + values};
}

Outcome map_filtering(const ScenarioConfig& cfg, const SvmModel& model, int jobs) {
  const auto traj = cfg.map.trajectory();
  const auto probe = cfg.probe_signal();
  const auto raw = build_map(traj, cfg.map.room, probe, cfg.map_noise(), cfg.pipeline, nullptr, jobs);
  const auto filtered = apply_classifier(raw, &model);
  const auto u = map_metrics(raw, cfg.map.tolerance_m);
  const auto f = map_metrics(filtered, cfg.map.tolerance_m);
  return {f.wall_fraction > u.wall_fraction && f.spurious_count < u.spurious_count,
          "wall fraction " + num(u.wall_fraction) + " -> " + num(f.wall_fraction) + ", spurious " +
              std::to_string(u.spurious_count) + " -> " + std::to_string(f.spurious_count) + " (" +
              std::to_string(f.accepted_count) + "/" + std::to_string(u.accepted_count) +
              " points kept, " + std::to_string(traj.poses.size()) + " poses)"};
}

Outcome classifier_protocol(const TrainingOutcome& t, const TrainingProtocol& p) {
  const bool sizes = t.dataset.size() == 1989 && t.train.size() == 1591 && t.test.size() == 398;
  return {sizes && p.folds == 5 && t.test_accuracy >= 0.85,
          "dataset " + std::to_string(t.dataset.size()) + ", split " + std::to_string(t.train.size()) + "/" +
              std::to_string(t.test.size()) + ", " + std::to_string(p.folds) + "-fold CV picked C=" +
              num(t.cv.best_c, 2) + " gamma=" + num(t.cv.best_width, 2) + " (cv " + pct(t.cv.cv_accuracy) +
              "), held-out accuracy " + pct(t.test_accuracy) + " (need >= 85%)"};
}

Outcome oracle_suites(const fs::path& unit) {
  const std::vector<std::string> cases{
      "noiseless single echo is recovered exactly on the integer grid",
      "gain estimation",
      "MPDR with identity covariance is delay-and-sum",
      "MPDR distortionless and minimum power",
      "estimated covariances are Hermitian PSD",
      "diagonal loading",
      "STFT analysis and synthesis round trip",
      "image-source taps agree with brute-force mirror enumeration",
      "realized SNR and SDNR are within 0.2 dB",
      "simulated decay matches the requested T60 within 20 percent",
      "diffuse noise coherence follows the cylindrical model",
  };
  const std::regex ran(R"(test cases:\s*1\s*\|\s*1 passed\s*\|\s*0 failed)");
  std::vector<std::string> failed;
  for (const auto& name : cases) {
    std::string out;
    const int code = shell(quote(unit) + " --test-case=\"" + name + "\"", &out);
    if (code != 0 || !std::regex_search(out, ran)) failed.push_back(name);
  }
  std::string detail = std::to_string(cases.size() - failed.size()) + "/" + std::to_string(cases.size()) +
                       " oracle checks passed";
  for (const auto& f : failed) detail += "; failed: " + f;
  return {failed.empty(), detail};
}

Outcome cli_determinism(const fs::path& cli, const fs::path& config, const fs::path& work) {
  struct Step {
    std::string name;
    std::string args;
    bool parallel;
  };
  auto run_all = [&](const fs::path& root, int jobs, std::string& err) {
    fs::remove_all(root);
    const std::string cfg = " --config " + quote(config);
    const std::string j = " --jobs " + std::to_string(jobs);
    const std::vector<Step> steps{
        {"sim", "sim" + cfg + " --out " + quote(root / "sim"), false},
        {"estimate", "estimate" + cfg + " --recording " + quote(root / "sim" / "recording.f32") + " --out " +
                         quote(root / "estimate"), false},
        {"train", "train" + cfg + j + " --out " + quote(root / "train"), true},
        {"map", "map" + cfg + j + " --model " + quote(root / "train" / "model.json") + " --out " +
                    quote(root / "map"), true},
        {"eval snr", "eval" + cfg + j + " --sweep snr --out " + quote(root / "eval_snr"), true},
        {"eval t60", "eval" + cfg + j + " --sweep t60 --out " + quote(root / "eval_t60"), true},
    };
    for (const auto& s : steps) {
      std::string out;
      if (shell(quote(cli) + " " + s.args, &out) != 0) {
        err = s.name + " failed: " + out;
        return false;
      }
    }
    return true;
  };
  std::string err;
  const auto a = work / "determinism_a";
  const auto b = work / "determinism_b";
  const auto c = work / "determinism_c";
  if (!run_all(a, 1, err) || !run_all(b, 1, err) || !run_all(c, 2, err)) return {false, err};
  const auto ta = tree(a);
  const auto tb = tree(b);
  const auto tc = tree(c);
  std::vector<std::string> diffs;
  for (const auto& [name, bytes] : ta) {
    if (!tb.contains(name) || tb.at(name) != bytes) diffs.push_back(name + " (rerun)");
    if (!tc.contains(name) || tc.at(name) != bytes) diffs.push_back(name + " (--jobs 2)");
  }
  if (tb.size() != ta.size() || tc.size() != ta.size()) diffs.push_back("file sets differ");
  std::string detail = std::to_string(ta.size()) +
                       " output files from sim, estimate, train, map, eval snr and eval t60 compared "
                       "across a rerun and --jobs 1 vs 2";
  for (const auto& d : diffs) detail += "; differs: " + d;
  return {diffs.empty(), detail};
}

template <typename F>
Outcome guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("error: ") + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"echomap acceptance suite"};
  fs::path cli, unit, workdir = "acceptance_tmp";
  fs::path config = fs::path(ECHOMAP_SOURCE_DIR) / "configs" / "default.json";
  fs::path smoke = fs::path(ECHOMAP_SOURCE_DIR) / "configs" / "smoke.json";
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--cli", cli, "echomap executable")->required();
  app.add_option("--unit", unit, "unit test executable")->required();
  app.add_option("--workdir", workdir, "scratch directory");
  app.add_option("--config", config, "scenario for criteria 1 to 6");
  app.add_option("--smoke-config", smoke, "scenario for the determinism runs");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(workdir);

  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = load_config(config);

  std::map<int, Outcome> results;
  SweepResult snr;
  bool have_snr = false;
  try {
    snr = run_snr_sweep(cfg.experiment_spec(SweepVariable::SnrDb), jobs);
    have_snr = true;
    write_text(workdir / "curve_snr.csv", curve_csv(snr.curve));
  } catch (const std::exception& e) {
    for (int k : {1, 2, 4}) results[k] = {false, std::string("error: ") + e.what()};
  }
  if (have_snr) {
    results[1] = guarded([&] { return snr_reproduction(snr); });
    results[2] = guarded([&] { return baseline_ordering(snr); });
    results[4] = guarded([&] { return doa_high_snr(snr); });
  }
  results[3] = guarded([&] {
    const auto r = run_t60_sweep(cfg.experiment_spec(SweepVariable::T60), jobs);
    write_text(workdir / "curve_t60.csv", curve_csv(r.curve));
    return t60_flatness(r);
  });

  try {
    const auto protocol = cfg.training_protocol();
    const auto trained = run_training(protocol, cfg.probe_signal(), cfg.pipeline, jobs);
    write_json(workdir / "model.json", to_json(trained.model));
    results[6] = guarded([&] { return classifier_protocol(trained, protocol); });
    results[5] = guarded([&] { return map_filtering(cfg, trained.model, jobs); });
  } catch (const std::exception& e) {
    for (int k : {5, 6}) results[k] = {false, std::string("error: ") + e.what()};
  }

  results[7] = guarded([&] { return oracle_suites(unit); });
  results[8] = guarded([&] { return cli_determinism(cli, smoke, workdir); });

  const std::map<int, std::string> names{
      {1, "SNR sweep reproduction"}, {2, "baseline ordering"},   {3, "T60 flatness"},
      {4, "DOA high-SNR floor"},     {5, "map filtering"},       {6, "classifier protocol"},
      {7, "oracle and property suites"}, {8, "CLI determinism"},
  };
  int failures = 0;
  for (const auto& [k, o] : results) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << k << " (" << names.at(k) << "): " << o.detail
              << "\n";
    failures += o.pass ? 0 : 1;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (8 - failures) << "/8 criteria passed in " << num(secs, 1) << " s\n";
  return failures == 0 ? 0 : 1;
}
