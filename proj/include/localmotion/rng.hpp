#pragma once

#include <cstdint>
#include <random>

#include "localmotion/geometry.hpp"

namespace localmotion {

/// Seeded random stream. Every variate is derived from the raw 64-bit engine
/// output with in-house transforms, so a (seed, stream) pair reproduces the
/// same sequence regardless of the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x5eed);
  /// Independent stream `stream` derived from `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform direction on the unit sphere in R^d (a sign in 1-D).
  Point unit_direction(std::size_t d);
  /// Uniform point in the unit ball of R^d.
  Point in_unit_ball(std::size_t d);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace localmotion
