#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "localmotion/geometry.hpp"
#include "localmotion/rng.hpp"

namespace localmotion {

enum class FamilyKind { kUniformBall, kTruncatedNormal, kTruncatedCauchy };

std::string_view to_string(FamilyKind kind);
FamilyKind parse_family_kind(std::string_view name);

/// A radially symmetric base density supported on the unit ball of R^d.
///
/// The truncated kinds are the conditional law of an isotropic normal
/// (profile exp(-r^2 / 2 s^2)) or multivariate Cauchy (profile
/// (1 + r^2 / s^2)^{-(d+1)/2}) given that the variate falls in the unit
/// ball. The normalising constant is computed once by radial quadrature; the
/// density bound is the analytic supremum, attained at the origin.
class DistributionFamily {
 public:
  static DistributionFamily uniform(std::size_t d);
  static DistributionFamily truncated_normal(std::size_t d, double scale);
  static DistributionFamily truncated_cauchy(std::size_t d, double scale);
  static DistributionFamily make(FamilyKind kind, std::size_t d, double scale);

  FamilyKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  /// Pre-truncation scale; unused by the uniform kind.
  double scale() const { return scale_; }
  /// Supremum of the base density over the unit ball.
  double density_bound() const { return bound_; }

  /// Base density at a point of the unit ball with norm `radius`; 0 outside.
  double base_density(double radius) const;
  /// A draw from the base density.
  Point sample_unit(Rng& rng) const;

 private:
  DistributionFamily(FamilyKind kind, std::size_t d, double scale);
  double profile(double radius) const;

  FamilyKind kind_;
  std::size_t dim_;
  double scale_;
  double normaliser_ = 1.0;
  double bound_ = 1.0;
};

/// Result of moving one center: the indices j != moved whose nearest
/// neighbor distance changed.
struct MoveReport {
  std::size_t moved = 0;
  std::vector<std::size_t> affected;
};

/// The hidden ground truth: centers q_i inside the bounding ball, the model
/// factors alpha and beta, the distribution family, and cached nearest
/// neighbor data.
class TruthState {
 public:
  TruthState(std::vector<Point> centers, double alpha, double beta,
             double bounding_radius, DistributionFamily family);

  std::size_t size() const { return centers_.size(); }
  std::size_t dim() const { return family_.dim(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  Ball bounding() const { return {Point(dim()), bounding_radius_}; }
  double bounding_radius() const { return bounding_radius_; }
  const DistributionFamily& family() const { return family_; }

  const Point& center(std::size_t i) const { return centers_.at(i); }
  std::span<const Point> centers() const { return centers_; }
  double nn_distance(std::size_t i) const { return nn_dist_.at(i); }
  std::size_t nn_index(std::size_t i) const { return nn_index_.at(i); }

  /// l_i = beta * N_i.
  double feature_radius(std::size_t i) const { return beta_ * nn_dist_.at(i); }
  /// The beta-local feature ball B(q_i, beta * N_i).
  Ball local_feature(std::size_t i) const { return {center(i), feature_radius(i)}; }

  /// X_i ~ P_i. Always inside local_feature(i).
  Point sample(std::size_t i, Rng& rng) const;
  /// P_i(x) = base((x - q_i) / l_i) / l_i^d.
  double density(std::size_t i, const Point& x) const;
  /// Upper bound nu / l_i^d on density(i, .).
  double density_bound(std::size_t i) const;

  /// Radius of the bounding ball over the current minimum nearest-neighbor
  /// distance.
  double aspect_ratio() const;

  /// Translate q_i by `displacement` and refresh the nearest-neighbor caches.
  /// Throws ModelViolation if the step is longer than alpha * N_i or leaves
  /// the bounding ball; the state is unchanged in that case.
  MoveReport move(std::size_t i, const Point& displacement);

  /// Incremented by every successful move.
  std::uint64_t version() const { return version_; }

  /// Brute-force check of the nearest-neighbor caches.
  bool caches_consistent(double rel_tol = 1e-12) const;

 private:
  void refresh_nn(std::size_t i);

  std::vector<Point> centers_;
  double alpha_;
  double beta_;
  double bounding_radius_;
  DistributionFamily family_;
  std::vector<double> nn_dist_;
  std::vector<std::size_t> nn_index_;
  std::uint64_t version_ = 0;
};

/// Relative slack accepted on the step-length and bounding-ball constraints,
/// so that steps of exactly alpha * N_i survive rounding.
inline constexpr double kConstraintSlack = 1e-12;

}  // namespace localmotion
