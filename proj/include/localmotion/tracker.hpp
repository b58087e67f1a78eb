#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "localmotion/geometry.hpp"
#include "localmotion/oracle.hpp"
#include "localmotion/rng.hpp"
#include "localmotion/truth.hpp"

namespace localmotion {

/// Per-object product-Cauchy hypothesis: center k_i and scale h_i.
struct Hypothesis {
  std::vector<Point> centers;
  std::vector<double> scales;

  std::size_t size() const { return centers.size(); }
  /// The hypothesis ball B(k_i, h_i).
  Ball ball(std::size_t i) const { return {centers.at(i), scales.at(i)}; }
};

/// Every center at the origin of `bounding`, every scale equal to its radius.
Hypothesis init_hypothesis(std::size_t n, const Ball& bounding);

/// prod_j 1 / (pi h (1 + ((x_j - k_j) / h)^2)).
double cauchy_density(const Point& center, double scale, const Point& x);
double log_cauchy_density(const Point& center, double scale, const Point& x);
double hypothesis_density(const Hypothesis& hyp, std::size_t i, const Point& x);

enum class Phase : std::uint8_t { kZoomOut, kZoomIn, kCoverScan };
std::string_view to_string(Phase phase);

/// Fired when a pair of responses (Y, .), (Y, +) triggers an expansion test:
/// on leaving zoom-out (after the expansion), and in zoom-in before a cover
/// scan. `claimed` is the ball the responses certify to contain the local
/// feature of `index`.
struct ExpansionEvent {
  std::size_t index = 0;
  Phase phase = Phase::kZoomOut;
  Ball claimed;
  /// Both responses were drawn from the same truth version.
  bool same_state = false;
};

struct CompletionEvent {
  std::size_t index = 0;
  bool same_state = false;
};

/// Hooks for runtime assertions and incremental bookkeeping. The tracker
/// itself never reads the truth; observers may.
class TrackerObserver {
 public:
  virtual ~TrackerObserver() = default;
  virtual void on_expansion(const ExpansionEvent&) {}
  virtual void on_completion(const CompletionEvent&) {}
  virtual void on_hypothesis_change(std::size_t /*index*/) {}
};

struct TrackerOptions {
  double beta = 0.1;
  /// Numerator of the expansion factor numerator / (1 - 2 beta). Anything
  /// but 3 is a deliberate mutation used as a negative control.
  double expansion_numerator = 3.0;
};

/// The zoom-out / zoom-in tracker as a state machine that consumes exactly
/// one oracle query per step.
///
///   ZOOM_OUT   query (k, h) then (k, h / beta). On (Y, .), (Y, +):
///              h <- 3h / (1 - 2 beta) and go to ZOOM_IN; otherwise h <- 2h.
///   ZOOM_IN    query (k, h) then (k, h / beta). (N, .): back to ZOOM_OUT.
///              (Y, .), (Y, -): object done, advance to the next index.
///              (Y, .), (Y, +): cover B(k, h) with balls of radius
///              h / (2 ceil(3 / (1 - 2 beta))) and go to COVER_SCAN.
///              (Y, .), (N, .): retest.
///   COVER_SCAN query the next cover ball (x, r). First (Y, .) wins:
///              k <- x, h <- 3r / (1 - 2 beta), back to ZOOM_IN. An
///              exhausted scan returns to ZOOM_IN unchanged.
class TrackByZoom {
 public:
  TrackByZoom(std::size_t n, const Ball& bounding, TrackerOptions options);

  void step(const TruthState& truth, Oracle& oracle, Rng& rng,
            TrackerObserver* observer = nullptr);

  const Hypothesis& hypothesis() const { return hyp_; }
  std::size_t current_index() const { return index_; }
  Phase phase() const { return phase_; }
  /// Second query of the current zoom pair is pending.
  bool awaiting_second() const { return have_first_; }
  std::size_t cover_size() const { return cover_.size(); }
  std::size_t cover_position() const { return cover_pos_; }

  std::uint64_t steps() const { return steps_; }
  std::uint64_t completions() const { return completions_; }
  /// Number of completed passes over all n indices.
  std::uint64_t iterations() const { return iterations_; }
  /// Tracker step at which each hypothesis last changed (0 = never).
  const std::vector<std::uint64_t>& modified_at() const { return modified_at_; }

  /// numerator / (1 - 2 beta).
  double expansion_factor() const { return expansion_; }
  /// 2 * ceil(3 / (1 - 2 beta)): hypothesis radius over cover radius.
  double cover_ratio() const { return cover_ratio_; }
  const TrackerOptions& options() const { return options_; }

 private:
  void set_scale(std::size_t i, double h, TrackerObserver* observer);
  void set_ball(std::size_t i, const Point& k, double h, TrackerObserver* observer);

  TrackerOptions options_;
  double expansion_;
  double cover_ratio_;
  Hypothesis hyp_;
  std::size_t index_ = 0;
  Phase phase_ = Phase::kZoomOut;
  bool have_first_ = false;
  OracleResponse first_;
  std::vector<Ball> cover_;
  std::size_t cover_pos_ = 0;
  std::uint64_t steps_ = 0;
  std::uint64_t completions_ = 0;
  std::uint64_t iterations_ = 0;
  std::vector<std::uint64_t> modified_at_;
};

}  // namespace localmotion
