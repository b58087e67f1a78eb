#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "localmotion/truth.hpp"

namespace localmotion {

enum class EvolverKind { kRandom, kDormant, kScripted, kAdversary };
enum class InitLayout { kUniform, kGrid, kClustered, kPairs };

std::string_view to_string(EvolverKind kind);
std::string_view to_string(InitLayout layout);

/// Everything needed to reproduce one simulation run.
///
/// Stored on disk as `key = value` lines; `#` starts a comment. Keys match
/// the member names below. Unknown or repeated keys are errors.
struct ExperimentConfig {
  std::size_t n = 32;
  std::size_t d = 1;
  double alpha = 0.1;
  double beta = 0.1;
  /// Tracker steps (oracle queries) per time unit.
  std::uint64_t sigma = 8;
  /// Bounding-ball radius R0. 0 = derived from the layout.
  double r0 = 0.0;
  /// If > 0, R0 is set to aspect_ratio * min_i N_i after placing the points.
  double aspect_ratio = 0.0;
  std::uint64_t seed = 1;

  FamilyKind family = FamilyKind::kUniformBall;
  double family_scale = 0.5;

  EvolverKind evolver = EvolverKind::kRandom;
  std::string script;
  /// First time unit of the adversary window; 0 = chosen from a dormant run
  /// (see auto_adversary_start).
  std::uint64_t adversary_start = 0;
  std::uint64_t adversary_window_divisor = 8;

  InitLayout init = InitLayout::kUniform;
  /// Radius of the region the initial points are placed in. 0 = R0.
  double init_radius = 0.0;
  double min_separation = 1.0;

  std::uint64_t max_time = 10000;
  /// Distance is estimated every `metrics_stride` time units; 0 = n.
  std::uint64_t metrics_stride = 0;
  /// A metrics row is written every `log_stride` time units.
  std::uint64_t log_stride = 1;
  /// Monte Carlo samples per object when no exact distance is available.
  std::uint64_t kl_samples = 256;
  /// Burn-in threshold on Phi / n; 0 = twice the completion bound.
  double burn_in_threshold = 0.0;
  /// Hypothesis snapshots every this many time units; 0 = off.
  std::uint64_t hypothesis_every = 0;
  /// Brute-force nearest-neighbor cache check every this many evolver steps;
  /// 0 = only at metrics strides.
  std::uint64_t cache_check_every = 0;
  /// Expansion-factor numerator (3 in the algorithm; other values are
  /// mutation tests).
  double expansion_numerator = 3.0;
  /// Require 0 < alpha, beta < 1/3.
  bool strict_parameters = true;

  std::string out_dir = "out";

  std::uint64_t effective_metrics_stride() const { return metrics_stride ? metrics_stride : n; }
  double effective_burn_in_threshold() const;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

/// Parses `key = value` text.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Applies one `key`, `value` pair (also used for --seed and sweeps).
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);
/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& cfg);

}  // namespace localmotion
