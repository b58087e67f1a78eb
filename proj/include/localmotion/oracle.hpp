#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "localmotion/geometry.hpp"
#include "localmotion/rng.hpp"
#include "localmotion/truth.hpp"

namespace localmotion {

/// The two bits returned by one oracle call: Y/N for the queried object and
/// +/- for "some other object".
struct OracleResponse {
  bool self_inside = false;
  bool other_inside = false;
  /// Truth version the response was drawn from. Bookkeeping for invariant
  /// checks only; it carries no positional information.
  std::uint64_t truth_version = 0;

  std::string str() const;  // "Y+", "N-", ...
};

/// Who asked; used only to split the ledger.
enum class QueryKind : std::uint8_t { kZoomOut = 0, kZoomIn = 1, kCoverScan = 2, kOther = 3 };

struct QueryLedger {
  std::uint64_t total = 0;
  std::uint64_t this_unit = 0;
  std::array<std::uint64_t, 4> per_kind{};
  /// Object positions actually drawn (a call may draw fewer than n).
  std::uint64_t samples_drawn = 0;
  /// Draws that fell outside their local feature ball. Must stay 0.
  std::uint64_t support_violations = 0;

  void begin_unit() { this_unit = 0; }
};

/// Ball-membership oracle over freshly sampled positions.
///
/// Each call is one joint realisation {X_j ~ P_j}. Objects whose support is
/// disjoint from the query ball cannot answer "inside", and objects whose
/// support lies inside the query ball always do, so only the straddling ones
/// are actually sampled; the other bit short-circuits on its first witness.
/// This yields the same law for the returned bits as drawing all n
/// positions.
class Oracle {
 public:
  OracleResponse query(const TruthState& truth, std::size_t i, const Point& center,
                       double radius, Rng& rng, QueryKind kind = QueryKind::kOther);

  const QueryLedger& ledger() const { return ledger_; }
  void begin_unit() { ledger_.begin_unit(); }

 private:
  /// Decides X_j in B(center, radius) for one object.
  bool draw_inside(const TruthState& truth, std::size_t j, const Point& center,
                   double radius, Rng& rng);

  QueryLedger ledger_;
};

}  // namespace localmotion
