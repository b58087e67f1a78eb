#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "localmotion/config.hpp"
#include "localmotion/evolver.hpp"
#include "localmotion/metrics.hpp"
#include "localmotion/oracle.hpp"
#include "localmotion/rng.hpp"
#include "localmotion/tracker.hpp"
#include "localmotion/truth.hpp"

namespace localmotion {

/// One line of the metrics log. The distance fields are set only every
/// metrics stride.
struct MetricsRow {
  std::uint64_t t = 0;
  std::uint64_t evolver_steps = 0;
  std::uint64_t tracker_queries = 0;
  double phi_total = 0.0;
  double phi_max_i = 0.0;
  std::optional<double> d_estimate_nats;
  std::optional<double> d_stderr_nats;
  std::uint64_t completions = 0;
};

/// Runtime assertion tallies. A passing run has every *_violations field at
/// zero.
struct InvariantCounters {
  std::uint64_t evolver_steps = 0;
  std::uint64_t illegal_steps = 0;

  // Potential increase per evolver step, hypothesis held fixed.
  std::uint64_t potential_checks = 0;
  std::uint64_t potential_violations = 0;
  double potential_bound = 0.0;
  double max_potential_increase = 0.0;

  // Objects whose nearest-neighbor distance changed in one step.
  std::uint64_t packing_violations = 0;
  std::size_t max_affected = 0;

  std::uint64_t cache_checks = 0;
  std::uint64_t cache_violations = 0;

  // Local feature inside the claimed ball after an expansion test. Only
  // pairs of responses drawn from one truth state are checked.
  std::uint64_t expansion_events = 0;
  std::uint64_t expansion_checked = 0;
  std::uint64_t expansion_straddled = 0;
  std::uint64_t containment_violations = 0;

  // Phi_i at index completion. Checked when neither q_i nor l_i changed
  // while index i was being processed; completions on disturbed objects are
  // tallied separately.
  std::uint64_t completion_events = 0;
  std::uint64_t completion_checked = 0;
  std::uint64_t completion_disturbed = 0;
  std::uint64_t completion_violations = 0;
  std::uint64_t completion_disturbed_over_bound = 0;
  double max_completion_phi = 0.0;

  // D_i <= kl_upper_bound(s_i, l_i, h_i, d) <= ln(w_d pi^d) + 2d ln 3 + 2d Phi_i.
  std::uint64_t kl_bound_checks = 0;
  std::uint64_t kl_bound_violations = 0;
  std::uint64_t kl_negative = 0;

  // Pairwise center ratios inside the bracket whenever every Phi_i <= phi0.
  std::uint64_t ratio_snapshots = 0;
  std::uint64_t ratio_violations = 0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;

  // Incrementally maintained Phi against a recomputation from scratch.
  std::uint64_t ledger_checks = 0;
  std::uint64_t ledger_violations = 0;
  double max_ledger_drift = 0.0;

  std::uint64_t support_violations = 0;
  std::uint64_t scheduler_violations = 0;

  std::uint64_t total_violations() const;
};

/// Initial centers and bounding radius for a configuration.
struct InitialLayout {
  std::vector<Point> centers;
  double bounding_radius = 0.0;
};

/// Builds the initial configuration described by `cfg` (drawing from `rng`
/// for the random layouts). Throws std::runtime_error if the layout cannot
/// be placed.
InitialLayout make_initial_layout(const ExperimentConfig& cfg, Rng& rng);

/// The evolver strategy requested by `cfg` for `truth`.
std::unique_ptr<EvolverStrategy> make_strategy(const ExperimentConfig& cfg, const TruthState& truth);

/// Evolver, tracker and metrics under the speedup contract: each time unit
/// is one (possibly empty) evolver step, then sigma tracker steps, then a
/// metrics row.
class Simulation final : private TrackerObserver {
 public:
  explicit Simulation(const ExperimentConfig& cfg);
  Simulation(const ExperimentConfig& cfg, TruthState truth, std::unique_ptr<EvolverStrategy> evolver);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Advance one time unit.
  void step();
  /// Advance until time() == t.
  void run_to(std::uint64_t t);

  std::uint64_t time() const { return time_; }
  const ExperimentConfig& config() const { return cfg_; }
  const TruthState& truth() const { return truth_; }
  const TrackByZoom& tracker() const { return tracker_; }
  const Oracle& oracle() const { return oracle_; }
  EvolverStrategy& evolver() { return *evolver_; }
  const InvariantCounters& counters() const { return counters_; }
  const std::vector<MetricsRow>& rows() const { return rows_; }
  double phi_total() const { return ledger_.total(); }
  double phi_max() const { return ledger_.max(); }
  double initial_phi() const { return initial_phi_; }
  double initial_phi_expected() const { return initial_phi_expected_; }
  double initial_aspect_ratio() const { return initial_aspect_ratio_; }
  /// Rows "t,i,k_1..k_d,h" for every hypothesis snapshot taken so far.
  const std::string& hypothesis_csv() const { return hypothesis_csv_; }

 private:
  void on_expansion(const ExpansionEvent& e) override;
  void on_completion(const CompletionEvent& e) override;
  void on_hypothesis_change(std::size_t index) override;

  void evolver_step();
  void record_row();
  void distance_snapshot(MetricsRow& row);
  void check_ratio();
  void check_caches();
  void check_ledger();
  void snapshot_hypothesis();

  ExperimentConfig cfg_;
  TruthState truth_;
  std::unique_ptr<EvolverStrategy> evolver_;
  TrackByZoom tracker_;
  Oracle oracle_;
  Rng evolver_rng_;
  Rng oracle_rng_;
  Rng metrics_rng_;
  PotentialLedger ledger_;
  InvariantCounters counters_;
  std::vector<MetricsRow> rows_;
  std::uint64_t time_ = 0;
  double phi0_;
  bool check_potential_bound_;
  double initial_phi_ = 0.0;
  double initial_phi_expected_ = 0.0;
  double initial_aspect_ratio_ = 0.0;
  std::uint64_t last_iterations_ = 0;
  // Truth version at which q_i or l_i last changed, and the version at which
  // the tracker started on the current index.
  std::vector<std::uint64_t> disturbed_at_;
  std::uint64_t index_started_at_ = 0;
  std::string hypothesis_csv_;
};

/// Earliest logged t such that Phi(t') / n <= threshold for every logged t'
/// in [t, t + n], with t + n not past the end of the log.
std::optional<std::uint64_t> detect_burn_in(const std::vector<MetricsRow>& rows, std::size_t n,
                                            double threshold_per_object);

struct RunSummary {
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t sigma = 0;
  std::uint64_t seed = 0;
  std::uint64_t final_time = 0;
  double initial_aspect_ratio = 0.0;
  double initial_phi = 0.0;
  double initial_phi_expected = 0.0;
  double burn_in_threshold = 0.0;
  std::optional<std::uint64_t> burn_in_time;
  // Over logged rows with t >= burn-in (empty if no burn-in).
  std::optional<double> steady_mean_d_per_n;
  std::optional<double> steady_max_d_per_n;
  std::optional<double> steady_mean_phi_per_n;
  std::optional<double> steady_max_phi_per_n;
  double final_phi_per_n = 0.0;
  std::optional<double> final_d_per_n;
  std::uint64_t tracker_queries = 0;
  std::array<std::uint64_t, 4> queries_per_kind{};
  std::uint64_t samples_drawn = 0;
  std::uint64_t evolver_steps = 0;
  std::uint64_t completions = 0;
  std::uint64_t iterations = 0;
  InvariantCounters counters;
  double elapsed_seconds = 0.0;
};

RunSummary summarize(const Simulation& sim);

struct RunResult {
  ExperimentConfig config;
  std::vector<MetricsRow> rows;
  RunSummary summary;
  std::string hypothesis_csv;
};

/// Runs `cfg` to max_time. No file output.
RunResult run(const ExperimentConfig& cfg);

/// Adversary window start used when adversary_start = 0: n time units after
/// the later of the burn-in time and the first completed pass of the same
/// configuration under a dormant evolver. Throws std::runtime_error if no
/// pass completes within max_time.
std::uint64_t auto_adversary_start(const ExperimentConfig& cfg);

struct CalibrationTrial {
  std::uint64_t sigma = 0;
  RunSummary summary;
  bool accepted = false;
};

struct Calibration {
  std::uint64_t sigma = 0;
  std::vector<CalibrationTrial> trials;
};

/// Smallest sigma among `candidates` (tried in increasing order) whose run
/// reaches burn-in and keeps the steady-state mean Phi / n under the burn-in
/// threshold. Falls back to the largest candidate.
Calibration calibrate_sigma(const ExperimentConfig& cfg, std::vector<std::uint64_t> candidates = {1, 2, 4, 8, 16});

}  // namespace localmotion
