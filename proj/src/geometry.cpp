#include "localmotion/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace localmotion {

namespace {

void check_dim(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw std::invalid_argument(
        fmt::format("dimension {} outside supported range [1, {}]", dim, kMaxDim));
  }
}

void check_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(
        fmt::format("dimension mismatch: {} vs {}", a.dim(), b.dim()));
  }
}

}  // namespace

Point::Point(std::size_t dim) : dim_(dim) { check_dim(dim); }

Point::Point(std::initializer_list<double> coords) : dim_(coords.size()) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point::Point(std::span<const double> coords) : dim_(coords.size()) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point& Point::operator+=(const Point& o) {
  check_same_dim(*this, o);
  for (std::size_t k = 0; k < dim_; ++k) c_[k] += o.c_[k];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  check_same_dim(*this, o);
  for (std::size_t k = 0; k < dim_; ++k) c_[k] -= o.c_[k];
  return *this;
}

Point& Point::operator*=(double s) {
  for (std::size_t k = 0; k < dim_; ++k) c_[k] *= s;
  return *this;
}

bool Point::finite() const {
  return std::all_of(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(dim_),
                     [](double v) { return std::isfinite(v); });
}

bool operator==(const Point& a, const Point& b) {
  if (a.dim_ != b.dim_) return false;
  for (std::size_t k = 0; k < a.dim_; ++k) {
    if (a.c_[k] != b.c_[k]) return false;
  }
  return true;
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }
Point operator*(Point a, double s) { return a *= s; }
Point operator*(double s, Point a) { return a *= s; }

double dot(const Point& a, const Point& b) {
  check_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) acc += a[k] * b[k];
  return acc;
}

double norm(const Point& a) {
  if (a.dim() == 1) return std::abs(a[0]);
  return std::sqrt(dot(a, a));
}

double squared_distance(const Point& a, const Point& b) {
  check_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return acc;
}

double distance(const Point& a, const Point& b) {
  if (a.dim() == 1 && b.dim() == 1) return std::abs(a[0] - b[0]);
  return std::sqrt(squared_distance(a, b));
}

std::string to_string(const Point& p) {
  return fmt::format("({})", fmt::join(p.coords(), ", "));
}

bool ball_contains(const Ball& b, const Point& x) {
  return distance(b.center, x) <= b.radius;
}

bool balls_intersect(const Ball& a, const Ball& b) {
  return distance(a.center, b.center) <= a.radius + b.radius;
}

bool ball_within(const Ball& inner, const Ball& outer, double rel_tol) {
  const double slack = rel_tol * std::max(inner.radius, outer.radius);
  return distance(inner.center, outer.center) + inner.radius <= outer.radius + slack;
}

double nearest_neighbor_distance(std::span<const Point> points, std::size_t i) {
  const std::size_t j = nearest_neighbor_index(points, i);
  return distance(points[i], points[j]);
}

std::size_t nearest_neighbor_index(std::span<const Point> points, std::size_t i) {
  if (points.size() < 2) {
    throw std::invalid_argument("nearest neighbor needs at least two points");
  }
  if (i >= points.size()) throw std::out_of_range("point index out of range");
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_j = i;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (j == i) continue;
    const double d2 = squared_distance(points[i], points[j]);
    if (d2 < best) {
      best = d2;
      best_j = j;
    }
  }
  return best_j;
}

double min_pairwise_distance(std::span<const Point> points) {
  if (points.size() < 2) {
    throw std::invalid_argument("pairwise distance needs at least two points");
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::min(best, squared_distance(points[i], points[j]));
    }
  }
  return std::sqrt(best);
}

double unit_ball_volume(std::size_t d) {
  const double half = static_cast<double>(d) / 2.0;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double cover_cardinality_bound(std::size_t d, double ratio) {
  const double per_axis =
      2.0 * std::ceil(ratio) * std::sqrt(static_cast<double>(d));
  return std::pow(per_axis, static_cast<double>(d));
}

std::vector<Ball> cover_ball(const Ball& b, double target_radius) {
  if (!(target_radius > 0.0)) {
    throw std::invalid_argument("cover_ball: target radius must be positive");
  }
  if (target_radius > b.radius * (1.0 + 1e-12)) {
    throw std::invalid_argument("cover_ball: target radius exceeds ball radius");
  }
  if (target_radius >= b.radius * (1.0 - 1e-12)) {
    return {Ball{b.center, target_radius}};
  }

  const std::size_t d = b.center.dim();
  const double root_d = std::sqrt(static_cast<double>(d));
  const double side = 2.0 * target_radius / root_d;
  // Cells per axis; snap values that are integral up to rounding.
  const double exact = b.radius * root_d / target_radius;
  const double snapped = std::round(exact);
  const auto per_axis = static_cast<std::size_t>(
      std::abs(exact - snapped) < 1e-9 * exact ? snapped : std::ceil(exact));
  const double origin_offset = -0.5 * side * static_cast<double>(per_axis);

  std::vector<Ball> out;
  std::array<std::size_t, kMaxDim> idx{};
  while (true) {
    Point cell_center(d);
    double gap2 = 0.0;  // squared distance from b.center to the cell box
    for (std::size_t k = 0; k < d; ++k) {
      const double lo = origin_offset + side * static_cast<double>(idx[k]);
      const double hi = lo + side;
      cell_center[k] = b.center[k] + 0.5 * (lo + hi);
      const double gap = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
      gap2 += gap * gap;
    }
    // Boxes that only touch the sphere add nothing: their contact point lies
    // in a neighboring box too.
    if (gap2 < b.radius * b.radius * (1.0 - 1e-12)) out.push_back(Ball{cell_center, target_radius});

    // Odometer increment, last axis fastest.
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (++idx[k] < per_axis) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

}  // namespace localmotion
