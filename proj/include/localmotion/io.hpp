#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "localmotion/experiments.hpp"
#include "localmotion/harness.hpp"

namespace localmotion {

/// Header plus one line per row; distance fields are empty where unset.
std::string metrics_csv(const std::vector<MetricsRow>& rows);
inline constexpr const char* kMetricsHeader =
    "t,evolver_steps,tracker_queries,phi_total,phi_max_i,d_estimate_nats,d_stderr_nats,completions";

/// Two-column "t value" files for plotting.
std::string phi_per_n_data(const std::vector<MetricsRow>& rows, std::size_t n);
std::string d_per_n_data(const std::vector<MetricsRow>& rows, std::size_t n);

nlohmann::json to_json(const InvariantCounters& c);
nlohmann::json to_json(const RunSummary& s);
nlohmann::json to_json(const LowerBoundResult& r);
nlohmann::json to_json(const VerifyReport& r);

void write_text(const std::filesystem::path& path, const std::string& text);

/// metrics.csv, summary.json, config.txt, phi_per_n.dat, d_per_n.dat and,
/// when snapshots were taken, hypotheses.csv.
void write_run_outputs(const RunResult& result, const std::filesystem::path& dir);

}  // namespace localmotion
