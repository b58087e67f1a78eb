#include "localmotion/io.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace localmotion {

using nlohmann::json;

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += fmt::format("{},{},{},{:.17g},{:.17g},", r.t, r.evolver_steps, r.tracker_queries,
                       r.phi_total, r.phi_max_i);
    if (r.d_estimate_nats) out += fmt::format("{:.17g}", *r.d_estimate_nats);
    out += ',';
    if (r.d_stderr_nats) out += fmt::format("{:.17g}", *r.d_stderr_nats);
    out += fmt::format(",{}\n", r.completions);
  }
  return out;
}

std::string phi_per_n_data(const std::vector<MetricsRow>& rows, std::size_t n) {
  std::string out = "# t phi_per_n\n";
  for (const MetricsRow& r : rows) {
    out += fmt::format("{} {:.10g}\n", r.t, r.phi_total / static_cast<double>(n));
  }
  return out;
}

std::string d_per_n_data(const std::vector<MetricsRow>& rows, std::size_t n) {
  std::string out = "# t d_per_n_nats\n";
  for (const MetricsRow& r : rows) {
    if (r.d_estimate_nats) {
      out += fmt::format("{} {:.10g}\n", r.t, *r.d_estimate_nats / static_cast<double>(n));
    }
  }
  return out;
}

json to_json(const InvariantCounters& c) {
  return {
      {"evolver_steps", c.evolver_steps},
      {"illegal_steps", c.illegal_steps},
      {"potential_checks", c.potential_checks},
      {"potential_violations", c.potential_violations},
      {"potential_bound", c.potential_bound},
      {"max_potential_increase", c.max_potential_increase},
      {"packing_violations", c.packing_violations},
      {"max_affected", c.max_affected},
      {"cache_checks", c.cache_checks},
      {"cache_violations", c.cache_violations},
      {"expansion_events", c.expansion_events},
      {"expansion_checked", c.expansion_checked},
      {"expansion_straddled", c.expansion_straddled},
      {"containment_violations", c.containment_violations},
      {"completion_events", c.completion_events},
      {"completion_checked", c.completion_checked},
      {"completion_disturbed", c.completion_disturbed},
      {"completion_violations", c.completion_violations},
      {"completion_disturbed_over_bound", c.completion_disturbed_over_bound},
      {"max_completion_phi", c.max_completion_phi},
      {"kl_bound_checks", c.kl_bound_checks},
      {"kl_bound_violations", c.kl_bound_violations},
      {"kl_negative", c.kl_negative},
      {"ratio_snapshots", c.ratio_snapshots},
      {"ratio_violations", c.ratio_violations},
      {"ratio_min", c.ratio_min},
      {"ratio_max", c.ratio_max},
      {"ledger_checks", c.ledger_checks},
      {"ledger_violations", c.ledger_violations},
      {"max_ledger_drift", c.max_ledger_drift},
      {"support_violations", c.support_violations},
      {"scheduler_violations", c.scheduler_violations},
      {"total_violations", c.total_violations()},
  };
}

json to_json(const RunSummary& s) {
  return {
      {"n", s.n},
      {"d", s.d},
      {"sigma", s.sigma},
      {"seed", s.seed},
      {"final_time", s.final_time},
      {"initial_aspect_ratio", s.initial_aspect_ratio},
      {"initial_phi", s.initial_phi},
      {"initial_phi_expected", s.initial_phi_expected},
      {"burn_in_threshold", s.burn_in_threshold},
      {"burn_in_time", optional_json(s.burn_in_time)},
      {"steady_mean_d_per_n", optional_json(s.steady_mean_d_per_n)},
      {"steady_max_d_per_n", optional_json(s.steady_max_d_per_n)},
      {"steady_mean_phi_per_n", optional_json(s.steady_mean_phi_per_n)},
      {"steady_max_phi_per_n", optional_json(s.steady_max_phi_per_n)},
      {"final_phi_per_n", s.final_phi_per_n},
      {"final_d_per_n", optional_json(s.final_d_per_n)},
      {"tracker_queries", s.tracker_queries},
      {"queries_per_kind",
       {{"zoom_out", s.queries_per_kind[0]},
        {"zoom_in", s.queries_per_kind[1]},
        {"cover_scan", s.queries_per_kind[2]},
        {"other", s.queries_per_kind[3]}}},
      {"samples_drawn", s.samples_drawn},
      {"evolver_steps", s.evolver_steps},
      {"completions", s.completions},
      {"iterations", s.iterations},
      {"invariants", to_json(s.counters)},
      {"elapsed_seconds", s.elapsed_seconds},
  };
}

json to_json(const LowerBoundResult& r) {
  json targets = json::array();
  for (const LowerBoundTarget& t : r.targets) {
    targets.push_back({
        {"index", t.index},
        {"pushes", t.pushes},
        {"altered", t.altered},
        {"gap_start", t.gap_start},
        {"gap_end", t.gap_end},
        {"d_start", t.d_start},
        {"d_end", t.d_end},
        {"disjoint", t.disjoint},
        {"mass_start", t.mass_start},
        {"mass_end", t.mass_end},
        {"checked", t.checked},
        {"argument_holds", t.argument_holds},
    });
  }
  return {
      {"window_start", r.window_start},
      {"window_end", r.window_end},
      {"kappa", r.kappa},
      {"target_count", r.target_count},
      {"d_per_n_start", r.d_per_n_start},
      {"d_per_n_end", r.d_per_n_end},
      {"c_lb", r.d_per_n_end},
      {"excess_per_n", r.excess_per_n},
      {"separation_failures", r.separation_failures},
      {"argument_violations", r.argument_violations},
      {"passed", r.passed},
      {"targets", targets},
      {"summary", to_json(r.summary)},
  };
}

json to_json(const VerifyReport& r) {
  json checks = json::array();
  for (const VerifyCheck& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"events", c.events},
                      {"violations", c.violations},
                      {"detail", c.detail}});
  }
  return {{"passed", r.passed}, {"checks", checks}, {"summary", to_json(r.summary)}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

void write_run_outputs(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::size_t n = result.config.n;
  write_text(dir / "metrics.csv", metrics_csv(result.rows));
  write_text(dir / "summary.json", to_json(result.summary).dump(2) + "\n");
  write_text(dir / "config.txt", to_text(result.config));
  write_text(dir / "phi_per_n.dat", phi_per_n_data(result.rows, n));
  write_text(dir / "d_per_n.dat", d_per_n_data(result.rows, n));
  if (!result.hypothesis_csv.empty()) {
    std::string header = "t,i";
    for (std::size_t k = 0; k < result.config.d; ++k) header += fmt::format(",k{}", k + 1);
    write_text(dir / "hypotheses.csv", header + ",h\n" + result.hypothesis_csv);
  }
}

}  // namespace localmotion
