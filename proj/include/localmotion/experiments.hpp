#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "localmotion/config.hpp"
#include "localmotion/harness.hpp"

namespace localmotion {

/// Outcome for one attacked object of the lower-bound construction.
struct LowerBoundTarget {
  std::size_t index = 0;
  int pushes = 0;
  /// The tracker changed the object's hypothesis during the window.
  bool altered = false;
  double gap_start = 0.0;
  double gap_end = 0.0;
  /// Exact KL of the object at the window start and end.
  double d_start = 0.0;
  double d_end = 0.0;
  /// Local feature intervals before and after the pushes are disjoint.
  bool disjoint = false;
  /// Hypothesis mass on the two feature intervals.
  double mass_start = 0.0;
  double mass_end = 0.0;
  /// Argument checked (unaltered and fully pushed targets only):
  /// D >= -ln(mass) on both intervals and exp(-d_start) + exp(-d_end) <= 1.
  bool checked = false;
  bool argument_holds = true;
};

struct LowerBoundResult {
  RunSummary summary;
  std::vector<MetricsRow> rows;
  std::uint64_t window_start = 0;
  std::uint64_t window_end = 0;
  int kappa = 0;
  std::size_t target_count = 0;
  /// D / n just before the window opens and at its end.
  double d_per_n_start = 0.0;
  double d_per_n_end = 0.0;
  /// (D(end) - D(start)) / n.
  double excess_per_n = 0.0;
  std::vector<LowerBoundTarget> targets;
  /// Fully pushed targets that ended less than twice as far from their partner.
  std::uint64_t separation_failures = 0;
  std::uint64_t argument_violations = 0;
  bool passed = false;
};

/// Runs the adversary on the pair layout through the end of its window,
/// measuring the distance with exact 1-D KL. Throws std::invalid_argument if
/// the configuration is not the pair layout with the adversary evolver.
LowerBoundResult lower_bound_experiment(const ExperimentConfig& cfg);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::uint64_t events = 0;
  std::uint64_t violations = 0;
  std::string detail;
};

struct VerifyReport {
  RunSummary summary;
  std::vector<VerifyCheck> checks;
  bool passed = false;
};

/// Runs `cfg` with every runtime assertion and reports one check per
/// invariant family.
VerifyReport verify(const ExperimentConfig& cfg);

struct SweepPoint {
  std::string value;
  RunResult result;
};

/// One run per value of `key`, all other settings from `cfg`.
std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, const std::string& key,
                              const std::vector<std::string>& values);

}  // namespace localmotion
