#include "localmotion/oracle.hpp"

#include <limits>
#include <stdexcept>

namespace localmotion {

std::string OracleResponse::str() const {
  return {self_inside ? 'Y' : 'N', other_inside ? '+' : '-'};
}

bool Oracle::draw_inside(const TruthState& truth, std::size_t j, const Point& center,
                         double radius, Rng& rng) {
  const Ball feature = truth.local_feature(j);
  const double gap = distance(feature.center, center);
  if (gap > radius + feature.radius) return false;  // disjoint supports
  if (gap + feature.radius <= radius) return true;  // support inside the query
  const Point x = truth.sample(j, rng);
  ++ledger_.samples_drawn;
  // Rounding in q + l u is relative to |q|, not to l.
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (norm(feature.center) + feature.radius);
  if (distance(x, feature.center) > feature.radius * (1.0 + 1e-12) + slack) {
    ++ledger_.support_violations;
  }
  return distance(x, center) <= radius;
}

OracleResponse Oracle::query(const TruthState& truth, std::size_t i, const Point& center,
                             double radius, Rng& rng, QueryKind kind) {
  if (!(radius > 0.0)) throw std::invalid_argument("oracle query radius must be positive");
  if (i >= truth.size()) throw std::out_of_range("oracle query index out of range");

  OracleResponse out;
  out.truth_version = truth.version();
  out.self_inside = draw_inside(truth, i, center, radius, rng);
  for (std::size_t j = 0; j < truth.size() && !out.other_inside; ++j) {
    if (j != i) out.other_inside = draw_inside(truth, j, center, radius, rng);
  }

  ++ledger_.total;
  ++ledger_.this_unit;
  ++ledger_.per_kind[static_cast<std::size_t>(kind)];
  return out;
}

}  // namespace localmotion
