#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "localmotion/geometry.hpp"
#include "localmotion/rng.hpp"
#include "localmotion/tracker.hpp"
#include "localmotion/truth.hpp"

namespace localmotion {

/// Move object `index` by `displacement`. Legal iff the displacement is no
/// longer than alpha * N_index (pre-move) and the result stays in B0.
struct EvolverStep {
  std::size_t index = 0;
  Point displacement;
};

/// What a strong adversary may look at: the truth, the public hypothesis and
/// the tracker's activity log. Never the oracle's future randomness.
struct AdversaryView {
  const TruthState& truth;
  const Hypothesis& hypothesis;
  /// Tracker step at which each hypothesis last changed.
  const std::vector<std::uint64_t>& modified_at;
  std::uint64_t tracker_steps = 0;
  std::size_t tracker_index = 0;
  /// Current simulation time unit (1-based while stepping).
  std::uint64_t time = 0;
};

class EvolverStrategy {
 public:
  virtual ~EvolverStrategy() = default;
  /// A legal step, or nullopt to stay dormant this time unit.
  virtual std::optional<EvolverStep> propose(const AdversaryView& view, Rng& rng) = 0;
  virtual std::string_view name() const = 0;
};

class DormantStrategy final : public EvolverStrategy {
 public:
  std::optional<EvolverStep> propose(const AdversaryView&, Rng&) override { return std::nullopt; }
  std::string_view name() const override { return "dormant"; }
};

/// Uniform index, uniform direction, length uniform in [0, alpha N_i];
/// proposals that would leave B0 are truncated along their direction.
class RandomStrategy final : public EvolverStrategy {
 public:
  std::optional<EvolverStep> propose(const AdversaryView& view, Rng& rng) override;
  std::string_view name() const override { return "random"; }
};

struct ScriptedStep {
  std::uint64_t time = 0;
  EvolverStep step;
};

/// Replays a fixed list of (time, step) entries; dormant at other times.
class ScriptedStrategy final : public EvolverStrategy {
 public:
  explicit ScriptedStrategy(std::vector<ScriptedStep> script);
  std::optional<EvolverStep> propose(const AdversaryView& view, Rng& rng) override;
  std::string_view name() const override { return "scripted"; }

 private:
  std::vector<ScriptedStep> script_;
  std::size_t next_ = 0;
};

/// Reads "t,i,d1,...,dd" rows; a header line starting with a letter and
/// '#' comment lines are skipped. Rows must be sorted by t.
std::vector<ScriptedStep> load_script_csv(const std::filesystem::path& path, std::size_t dim);

/// Smallest kappa with (1 + alpha)^kappa >= 2: pushes needed to double a
/// pair's separation.
int adversary_push_count(double alpha);

struct AdversaryParams {
  /// First time unit of the attack window.
  std::uint64_t start_time = 1;
  /// Window length is ceil(n / window_divisor) time units.
  std::uint64_t window_divisor = 8;
};

/// Lower-bound evolver on the 1-D pair layout a_i = 100 i, b_i = 100 i + 1
/// (stored as a at even indices, b at odd ones).
///
/// Dormant until start_time. At the first active unit it ranks the a-objects
/// by how long the tracker will take to reach them in its cyclic order and
/// keeps the first n / (kappa M). It then pushes each chosen a_i directly
/// away from b_i by exactly alpha * N_{a,i}, kappa times in a row, one push
/// per time unit, skipping any target whose hypothesis the tracker changed
/// since the window opened. Dormant again after the window.
class LowerBoundAdversary final : public EvolverStrategy {
 public:
  /// Throws std::invalid_argument if `truth` is not the pair layout.
  LowerBoundAdversary(const TruthState& truth, AdversaryParams params);

  std::optional<EvolverStep> propose(const AdversaryView& view, Rng& rng) override;
  std::string_view name() const override { return "adversary"; }

  int kappa() const { return kappa_; }
  std::uint64_t window_start() const { return params_.start_time; }
  std::uint64_t window_end() const { return params_.start_time + window_length_; }
  std::size_t target_count() const { return target_count_; }
  /// Targets in the order they were attacked (filled once the window opens).
  const std::vector<std::size_t>& targets() const { return targets_; }
  /// Pushes delivered to each entry of targets().
  const std::vector<int>& pushes() const { return pushes_; }

 private:
  void choose_targets(const AdversaryView& view);

  AdversaryParams params_;
  int kappa_;
  std::uint64_t window_length_;
  std::size_t target_count_;
  std::uint64_t opened_at_step_ = 0;
  bool opened_ = false;
  std::vector<std::size_t> queue_;
  std::size_t queue_pos_ = 0;
  std::vector<std::size_t> targets_;
  std::vector<int> pushes_;
};

/// Pair layout of the lower-bound construction: m pairs at 100 i and
/// 100 i + 1, i = 1..m.
std::vector<Point> pair_layout(std::size_t pairs);

/// Applies `step` to `truth` (see TruthState::move).
MoveReport apply_step(TruthState& truth, const EvolverStep& step);

/// Certified bound on the increase of the potential from one evolver step
/// with the hypothesis held fixed:
///   ln((1 + alpha / beta) / sqrt(1 - alpha))
///     + 2 * 3^d * 2 ln((1 - alpha) / (1 - 2 alpha)).
/// The first term covers the moved object, the second the at most 2 * 3^d
/// objects whose nearest neighbor distance can change.
double evolver_potential_bound(double alpha, double beta, std::size_t d);

/// 2 * 3^d: packing bound on the objects whose N_j a single step can change.
std::size_t affected_count_bound(std::size_t d);

std::unique_ptr<EvolverStrategy> make_dormant();
std::unique_ptr<EvolverStrategy> make_random();

}  // namespace localmotion
