#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "localmotion/rng.hpp"
#include "localmotion/tracker.hpp"
#include "localmotion/truth.hpp"

namespace localmotion {

/// Phi_i = ln(max(s, l, h) / sqrt(l h)).
double object_potential(double s, double l, double h);

struct PotentialBreakdown {
  std::vector<double> s;
  std::vector<double> l;
  std::vector<double> h;
  std::vector<double> phi;
  double total = 0.0;
  double max = 0.0;
};

PotentialBreakdown potential(const TruthState& truth, const Hypothesis& hyp);
double object_potential(const TruthState& truth, const Hypothesis& hyp, std::size_t i);

/// Potential kept up to date object by object.
class PotentialLedger {
 public:
  PotentialLedger() = default;
  PotentialLedger(const TruthState& truth, const Hypothesis& hyp);

  /// Recompute Phi_i and return the change.
  double refresh(const TruthState& truth, const Hypothesis& hyp, std::size_t i);
  double total() const { return total_; }
  double value(std::size_t i) const { return phi_.at(i); }
  double max() const;
  std::size_t size() const { return phi_.size(); }

 private:
  std::vector<double> phi_;
  double total_ = 0.0;
};

/// ln(3 sqrt((1 + 2 beta) / (1 - beta))): the potential bound at completion.
double completion_potential_bound(double beta);

/// Sum of ln sqrt(R0 / l_i) over all objects: the potential of the initial
/// hypothesis (centers at the origin, scales R0).
double initial_potential(const TruthState& truth);

enum class KLMethod : std::uint8_t { kExact1d, kMonteCarlo, kQuadrature };
std::string_view to_string(KLMethod method);

struct KLEstimate {
  double value = 0.0;
  double std_error = 0.0;
  KLMethod method = KLMethod::kExact1d;
  std::uint64_t samples = 0;
};

/// KL(U[q - l, q + l] || Cauchy(k, h)) in nats, in closed form via
/// int ln(1 + u^2) du = u ln(1 + u^2) - 2u + 2 atan(u).
double kl_exact_1d(double q, double l, double k, double h);
/// Same for object i of a 1-D uniform truth.
double kl_exact_1d(const TruthState& truth, const Hypothesis& hyp, std::size_t i);

/// Sample mean of ln(P_i(X) / H_i(X)) with X ~ P_i, and its standard error.
KLEstimate kl_monte_carlo(const TruthState& truth, const Hypothesis& hyp, std::size_t i,
                          std::uint64_t samples, Rng& rng);

/// Deterministic quadrature in d = 1 (Gauss-Legendre on the interval) or
/// d = 2 (Gauss-Legendre in x over the bounding square, then over the exact
/// chord of the disk in y). Any family.
KLEstimate kl_quadrature(const TruthState& truth, const Hypothesis& hyp, std::size_t i,
                         std::size_t panels = 8);

/// ln(omega_d pi^d) + d ln((h^2 + (s + l)^2) / (l h)).
double kl_upper_bound(double s, double l, double h, std::size_t d);

/// d (ln Lambda0 + ln(3 / beta)): distance of the uninformed hypothesis
/// (uniform over 3 B0). Requires 0 < beta < 1/3 and Lambda0 >= 1.
double naive_distance_bound(double aspect_ratio, double beta, std::size_t d);

/// Total distance: exact in 1-D for uniform truth, Monte Carlo otherwise.
/// The standard error of the Monte Carlo sum assumes independent objects.
KLEstimate total_distance(const TruthState& truth, const Hypothesis& hyp,
                          std::uint64_t samples_per_object, Rng& rng);
/// Per-object distances by the same rule.
std::vector<KLEstimate> object_distances(const TruthState& truth, const Hypothesis& hyp,
                                         std::uint64_t samples_per_object, Rng& rng);

struct PairwiseRatio {
  double min = 0.0;
  double max = 0.0;
};

/// Extremes over i < j of ||k_i - k_j|| / ||q_i - q_j||.
PairwiseRatio pairwise_ratio(const TruthState& truth, const Hypothesis& hyp);

/// Bracket implied by Phi_i <= ln c for all i: with h_i <= c^2 l_i,
/// s_i <= c^2 l_i and l_i <= beta ||q_i - q_j|| the ratio lies in
/// [max(0, 1 - 2 beta c^2), 1 + 2 beta c^2].
PairwiseRatio pairwise_ratio_bracket(double beta, double log_c);

}  // namespace localmotion
