#include "localmotion/rng.hpp"

#include <cmath>
#include <numbers>

namespace localmotion {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(seed) ^ splitmix64(stream * 0x2545f4914f6cdd1dULL + 1));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n <= 1) return 0;
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Point Rng::unit_direction(std::size_t d) {
  Point p(d);
  if (d == 1) {
    p[0] = uniform() < 0.5 ? -1.0 : 1.0;
    return p;
  }
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      p[k] = normal();
      n2 += p[k] * p[k];
    }
  } while (n2 < 1e-24);
  return p * (1.0 / std::sqrt(n2));
}

Point Rng::in_unit_ball(std::size_t d) {
  Point p(d);
  if (d <= 3) {
    // Rejection from the enclosing cube; acceptance is at least pi/6.
    while (true) {
      double n2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        p[k] = 2.0 * uniform() - 1.0;
        n2 += p[k] * p[k];
      }
      if (n2 <= 1.0) return p;
    }
  }
  const double r = std::pow(uniform(), 1.0 / static_cast<double>(d));
  return unit_direction(d) * r;
}

}  // namespace localmotion
