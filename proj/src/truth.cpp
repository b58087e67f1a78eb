#include "localmotion/truth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "localmotion/quadrature.hpp"

namespace localmotion {

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kUniformBall: return "uniform-ball";
    case FamilyKind::kTruncatedNormal: return "truncated-normal";
    case FamilyKind::kTruncatedCauchy: return "truncated-cauchy";
  }
  return "unknown";
}

FamilyKind parse_family_kind(std::string_view name) {
  if (name == "uniform-ball" || name == "uniform") return FamilyKind::kUniformBall;
  if (name == "truncated-normal") return FamilyKind::kTruncatedNormal;
  if (name == "truncated-cauchy") return FamilyKind::kTruncatedCauchy;
  throw std::invalid_argument(fmt::format("unknown distribution family '{}'", name));
}

DistributionFamily::DistributionFamily(FamilyKind kind, std::size_t d, double scale)
    : kind_(kind), dim_(d), scale_(scale) {
  if (d == 0 || d > kMaxDim) throw std::invalid_argument("family dimension out of range");
  const double omega = unit_ball_volume(d);
  if (kind == FamilyKind::kUniformBall) {
    normaliser_ = omega;
    bound_ = 1.0 / omega;
    return;
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("truncated family needs a positive finite scale");
  }
  // Integral over the unit ball in polar form: d * omega_d * int_0^1 g(r) r^{d-1} dr.
  const auto dd = static_cast<double>(d);
  const double radial = integrate(
      [&](double r) { return profile(r) * std::pow(r, dd - 1.0); }, 0.0, 1.0, 32, 24);
  normaliser_ = dd * omega * radial;
  // Both profiles are decreasing with profile(0) = 1.
  bound_ = 1.0 / normaliser_;
}

DistributionFamily DistributionFamily::uniform(std::size_t d) {
  return {FamilyKind::kUniformBall, d, 1.0};
}
DistributionFamily DistributionFamily::truncated_normal(std::size_t d, double scale) {
  return {FamilyKind::kTruncatedNormal, d, scale};
}
DistributionFamily DistributionFamily::truncated_cauchy(std::size_t d, double scale) {
  return {FamilyKind::kTruncatedCauchy, d, scale};
}
DistributionFamily DistributionFamily::make(FamilyKind kind, std::size_t d, double scale) {
  return {kind, d, scale};
}

double DistributionFamily::profile(double radius) const {
  switch (kind_) {
    case FamilyKind::kUniformBall:
      return 1.0;
    case FamilyKind::kTruncatedNormal:
      return std::exp(-0.5 * radius * radius / (scale_ * scale_));
    case FamilyKind::kTruncatedCauchy: {
      const double u = radius / scale_;
      return std::pow(1.0 + u * u, -0.5 * (static_cast<double>(dim_) + 1.0));
    }
  }
  return 0.0;
}

double DistributionFamily::base_density(double radius) const {
  if (radius > 1.0) return 0.0;
  return profile(radius) / normaliser_;
}

Point DistributionFamily::sample_unit(Rng& rng) const {
  if (kind_ == FamilyKind::kUniformBall) return rng.in_unit_ball(dim_);
  // Rejection against the uniform proposal; profile(0) = 1 is the envelope.
  while (true) {
    Point x = rng.in_unit_ball(dim_);
    if (rng.uniform() < profile(norm(x))) return x;
  }
}

TruthState::TruthState(std::vector<Point> centers, double alpha, double beta,
                       double bounding_radius, DistributionFamily family)
    : centers_(std::move(centers)),
      alpha_(alpha),
      beta_(beta),
      bounding_radius_(bounding_radius),
      family_(std::move(family)) {
  if (centers_.size() < 2) throw ModelViolation("the model needs at least two objects");
  if (!(alpha_ > 0.0 && alpha_ < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(beta_ > 0.0 && beta_ < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(bounding_radius_ > 0.0)) throw std::invalid_argument("bounding radius must be positive");
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const Point& q = centers_[i];
    if (q.dim() != family_.dim()) throw std::invalid_argument("center dimension mismatch");
    if (!q.finite()) throw ModelViolation(fmt::format("center {} is not finite", i));
    if (norm(q) > bounding_radius_ * (1.0 + kConstraintSlack)) {
      throw ModelViolation(fmt::format("center {} lies outside the bounding ball", i));
    }
  }
  nn_dist_.assign(centers_.size(), 0.0);
  nn_index_.assign(centers_.size(), 0);
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    refresh_nn(i);
    if (!(nn_dist_[i] > 0.0)) {
      throw ModelViolation(fmt::format("duplicate centers at indices {} and {}", i, nn_index_[i]));
    }
  }
}

void TruthState::refresh_nn(std::size_t i) {
  nn_index_[i] = nearest_neighbor_index(centers_, i);
  nn_dist_[i] = distance(centers_[i], centers_[nn_index_[i]]);
}

Point TruthState::sample(std::size_t i, Rng& rng) const {
  return center(i) + family_.sample_unit(rng) * feature_radius(i);
}

double TruthState::density(std::size_t i, const Point& x) const {
  const double l = feature_radius(i);
  const double r = distance(x, center(i)) / l;
  return family_.base_density(r) / std::pow(l, static_cast<double>(dim()));
}

double TruthState::density_bound(std::size_t i) const {
  return family_.density_bound() / std::pow(feature_radius(i), static_cast<double>(dim()));
}

double TruthState::aspect_ratio() const {
  return bounding_radius_ / *std::min_element(nn_dist_.begin(), nn_dist_.end());
}

MoveReport TruthState::move(std::size_t i, const Point& displacement) {
  if (i >= size()) throw std::out_of_range("move: index out of range");
  if (displacement.dim() != dim()) throw std::invalid_argument("move: dimension mismatch");
  const double step = norm(displacement);
  const double limit = alpha_ * nn_dist_[i];
  if (!(step <= limit * (1.0 + kConstraintSlack))) {
    throw ModelViolation(fmt::format(
        "step of length {} for object {} exceeds alpha * N_i = {}", step, i, limit));
  }
  const Point target = centers_[i] + displacement;
  if (!(norm(target) <= bounding_radius_ * (1.0 + kConstraintSlack))) {
    throw ModelViolation(fmt::format("step moves object {} outside the bounding ball", i));
  }

  MoveReport report;
  report.moved = i;
  centers_[i] = target;
  std::vector<std::size_t> stale;
  for (std::size_t j = 0; j < size(); ++j) {
    if (j == i) continue;
    const double dji = distance(centers_[j], target);
    const double before = nn_dist_[j];
    if (nn_index_[j] == i) {
      if (dji <= before) {
        nn_dist_[j] = dji;
      } else {
        stale.push_back(j);
        continue;
      }
    } else if (dji < before) {
      nn_dist_[j] = dji;
      nn_index_[j] = i;
    }
    if (nn_dist_[j] != before) report.affected.push_back(j);
  }
  for (std::size_t j : stale) {
    const double before = nn_dist_[j];
    refresh_nn(j);
    if (nn_dist_[j] != before) report.affected.push_back(j);
  }
  refresh_nn(i);
  std::sort(report.affected.begin(), report.affected.end());
  ++version_;
  return report;
}

bool TruthState::caches_consistent(double rel_tol) const {
  for (std::size_t i = 0; i < size(); ++i) {
    const double fresh = nearest_neighbor_distance(centers_, i);
    if (std::abs(fresh - nn_dist_[i]) > rel_tol * fresh) return false;
  }
  return true;
}

}  // namespace localmotion
