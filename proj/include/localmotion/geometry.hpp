#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace localmotion {

/// Largest supported ambient dimension. Points keep their coordinates inline
/// so the simulation hot loops never allocate.
inline constexpr std::size_t kMaxDim = 8;

/// Raised when an operation would break an assumption of the local-motion
/// model (duplicate centers, an oversized step, a point leaving the bounding
/// ball, ...).
class ModelViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim);
  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);

  std::size_t dim() const { return dim_; }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  std::span<const double> coords() const { return {c_.data(), dim_}; }

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s);

  bool finite() const;
  friend bool operator==(const Point& a, const Point& b);

 private:
  std::array<double, kMaxDim> c_{};
  std::size_t dim_ = 0;
};

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
Point operator*(Point a, double s);
Point operator*(double s, Point a);

double dot(const Point& a, const Point& b);
double norm(const Point& a);
double distance(const Point& a, const Point& b);
double squared_distance(const Point& a, const Point& b);

std::string to_string(const Point& p);

/// Closed Euclidean ball.
struct Ball {
  Point center;
  double radius = 0.0;
};

bool ball_contains(const Ball& b, const Point& x);
bool balls_intersect(const Ball& a, const Ball& b);
/// True iff `inner` is a subset of `outer`. `rel_tol` absorbs rounding on
/// radii of very different magnitudes.
bool ball_within(const Ball& inner, const Ball& outer, double rel_tol = 0.0);

/// Distance from points[i] to its nearest other point. Brute force.
double nearest_neighbor_distance(std::span<const Point> points, std::size_t i);
/// Index of the nearest other point (lowest index on ties).
std::size_t nearest_neighbor_index(std::span<const Point> points, std::size_t i);
double min_pairwise_distance(std::span<const Point> points);

/// Volume of the unit ball in R^d.
double unit_ball_volume(std::size_t d);

/// Balls of radius `target_radius` whose union covers `b`.
///
/// The enclosing cube of `b` is tiled with axis-aligned cells of side
/// 2 * target_radius / sqrt(d); every cell that meets `b` contributes the
/// ball circumscribing it. Cells come back in lexicographic order (first
/// coordinate slowest). When target_radius equals the radius of `b`, `b`
/// itself is returned.
std::vector<Ball> cover_ball(const Ball& b, double target_radius);

/// Upper bound (2 * ceil(ratio) * sqrt(d))^d on the size of any cover produced
/// by cover_ball for radius ratio `ratio` = b.radius / target_radius.
double cover_cardinality_bound(std::size_t d, double ratio);

}  // namespace localmotion
