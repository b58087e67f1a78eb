#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace localmotion {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights of the `order`-point rule, computed by Newton iteration
/// on the Legendre recurrence. Cached per order.
const GaussLegendre& gauss_legendre(std::size_t order);

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` equal
/// panels of `order` points each.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t panels = 16, std::size_t order = 20);

}  // namespace localmotion
