#include "localmotion/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace localmotion {

namespace {

GaussLegendre build_rule(std::size_t order) {
  GaussLegendre rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const auto n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const auto kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
  }
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(std::size_t order) {
  if (order == 0) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  static std::mutex mu;
  static std::map<std::size_t, GaussLegendre> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t panels, std::size_t order) {
  const GaussLegendre& rule = gauss_legendre(order);
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      acc += rule.weights[k] * f(mid + 0.5 * width * rule.nodes[k]);
    }
    total += 0.5 * width * acc;
  }
  return total;
}

}  // namespace localmotion
