// Command line front end: run, verify, sweep, lower-bound, calibrate.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "localmotion/config.hpp"
#include "localmotion/experiments.hpp"
#include "localmotion/harness.hpp"
#include "localmotion/io.hpp"

namespace fs = std::filesystem;
using namespace localmotion;

namespace {

constexpr int kFailed = 1;
constexpr int kError = 2;

ExperimentConfig load(const std::string& path, std::optional<std::uint64_t> seed,
                      const std::optional<std::string>& out) {
  ExperimentConfig cfg = load_config(path);
  if (seed) cfg.seed = *seed;
  if (out) cfg.out_dir = *out;
  cfg.validate();
  return cfg;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt::format("{:.4f}", *v) : std::string("-");
}

void print_summary(const RunSummary& s) {
  fmt::print("n={} d={} sigma={} T={} Lambda0={:.4g}\n", s.n, s.d, s.sigma, s.final_time,
             s.initial_aspect_ratio);
  fmt::print("burn-in: {}  steady D/n mean {} max {}  Phi/n mean {} max {}\n",
             s.burn_in_time ? std::to_string(*s.burn_in_time) : std::string("none"),
             fmt_opt(s.steady_mean_d_per_n), fmt_opt(s.steady_max_d_per_n),
             fmt_opt(s.steady_mean_phi_per_n), fmt_opt(s.steady_max_phi_per_n));
  fmt::print("queries {}  evolver steps {}  completions {}  violations {}\n", s.tracker_queries,
             s.evolver_steps, s.completions, s.counters.total_violations());
}

bool run_passed(const RunSummary& s) {
  return s.counters.total_violations() == 0 &&
         std::abs(s.initial_phi - s.initial_phi_expected) <= 1e-9;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tracking locally moving objects with a two-bit oracle"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string vary;

  auto* run_cmd = app.add_subcommand("run", "Run one simulation and write its logs");
  run_cmd->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", seed, "Override the seed");
  run_cmd->add_option("--out", out, "Output directory");

  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant battery");
  verify_cmd->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--seed", seed, "Override the seed");
  verify_cmd->add_option("--out", out, "Write verify.json here");

  auto* sweep_cmd = app.add_subcommand("sweep", "One run per value of a config key");
  sweep_cmd->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--vary", vary, "KEY=V1,V2,...")->required();
  sweep_cmd->add_option("--seed", seed, "Override the seed");
  sweep_cmd->add_option("--out", out, "Output directory");

  auto* lb_cmd = app.add_subcommand("lower-bound", "Adversarial lower-bound experiment");
  lb_cmd->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  lb_cmd->add_option("--seed", seed, "Override the seed");
  lb_cmd->add_option("--out", out, "Write lower_bound.json and metrics.csv here");

  auto* cal_cmd = app.add_subcommand("calibrate", "Pick sigma from 1, 2, 4, 8, 16");
  cal_cmd->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  cal_cmd->add_option("--seed", seed, "Override the seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const ExperimentConfig cfg = load(config, seed, out);
      const RunResult result = run(cfg);
      write_run_outputs(result, cfg.out_dir);
      print_summary(result.summary);
      fmt::print("wrote {}\n", cfg.out_dir);
      return run_passed(result.summary) ? EXIT_SUCCESS : kFailed;
    }
    if (verify_cmd->parsed()) {
      const ExperimentConfig cfg = load(config, seed, std::nullopt);
      const VerifyReport report = verify(cfg);
      for (const VerifyCheck& c : report.checks) {
        fmt::print("{} {:<24} events={} violations={} {}\n", c.passed ? "PASS" : "FAIL", c.name,
                   c.events, c.violations, c.detail);
      }
      print_summary(report.summary);
      if (out) write_text(fs::path(*out) / "verify.json", to_json(report).dump(2) + "\n");
      return report.passed ? EXIT_SUCCESS : kFailed;
    }
    if (sweep_cmd->parsed()) {
      const auto eq = vary.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--vary expects KEY=V1,V2,...");
      const std::string key = vary.substr(0, eq);
      const std::vector<std::string> values = split(vary.substr(eq + 1), ',');
      const ExperimentConfig cfg = load(config, seed, out);
      const auto points = sweep(cfg, key, values);
      std::string table =
          fmt::format("{},burn_in_time,steady_mean_d_per_n,steady_mean_phi_per_n,initial_aspect_ratio,"
                      "violations,elapsed_seconds\n", key);
      bool passed = true;
      for (const SweepPoint& p : points) {
        const RunSummary& s = p.result.summary;
        write_run_outputs(p.result, fs::path(cfg.out_dir) / fmt::format("{}={}", key, p.value));
        table += fmt::format("{},{},{},{},{:.10g},{},{:.3f}\n", p.value,
                             s.burn_in_time ? std::to_string(*s.burn_in_time) : std::string(),
                             s.steady_mean_d_per_n ? fmt::format("{:.10g}", *s.steady_mean_d_per_n) : "",
                             s.steady_mean_phi_per_n ? fmt::format("{:.10g}", *s.steady_mean_phi_per_n) : "",
                             s.initial_aspect_ratio, s.counters.total_violations(), s.elapsed_seconds);
        passed = passed && run_passed(s);
      }
      write_text(fs::path(cfg.out_dir) / "sweep.csv", table);
      fmt::print("{}", table);
      return passed ? EXIT_SUCCESS : kFailed;
    }
    if (lb_cmd->parsed()) {
      const ExperimentConfig cfg = load(config, seed, out);
      const LowerBoundResult r = lower_bound_experiment(cfg);
      fmt::print("window [{}, {}) kappa={} targets={}/{}\n", r.window_start, r.window_end, r.kappa,
                 r.targets.size(), r.target_count);
      fmt::print("D/n start {:.6f} end {:.6f} (c_lb) excess {:.6f}\n", r.d_per_n_start,
                 r.d_per_n_end, r.excess_per_n);
      fmt::print("separation failures {} argument violations {} invariant violations {}\n",
                 r.separation_failures, r.argument_violations,
                 r.summary.counters.total_violations());
      fmt::print("{}\n", r.passed ? "PASS" : "FAIL");
      if (out) {
        write_text(fs::path(*out) / "lower_bound.json", to_json(r).dump(2) + "\n");
        write_text(fs::path(*out) / "metrics.csv", metrics_csv(r.rows));
      }
      return r.passed ? EXIT_SUCCESS : kFailed;
    }
    if (cal_cmd->parsed()) {
      const ExperimentConfig cfg = load(config, seed, std::nullopt);
      const Calibration cal = calibrate_sigma(cfg);
      for (const CalibrationTrial& t : cal.trials) {
        fmt::print("sigma={:<3} burn-in {:<8} steady Phi/n {} {}\n", t.sigma,
                   t.summary.burn_in_time ? std::to_string(*t.summary.burn_in_time) : "none",
                   fmt_opt(t.summary.steady_mean_phi_per_n), t.accepted ? "accepted" : "rejected");
      }
      fmt::print("sigma = {}\n", cal.sigma);
      return EXIT_SUCCESS;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
