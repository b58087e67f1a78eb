#include <cmath>

#include <gtest/gtest.h>

#include "localmotion/oracle.hpp"

namespace lm = localmotion;
using lm::Point;

namespace {

lm::TruthState two_points() {
  return lm::TruthState({Point{0.0}, Point{10.0}}, 0.1, 0.1, 100.0, lm::DistributionFamily::uniform(1));
}

}  // namespace

TEST(Oracle, ContainedSupportIsAlwaysYesMinus) {
  const auto t = two_points();
  lm::Oracle oracle;
  lm::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto r = oracle.query(t, 0, Point{0.0}, 2.0, rng);
    ASSERT_TRUE(r.self_inside);
    ASSERT_FALSE(r.other_inside);
    ASSERT_EQ(r.str(), "Y-");
  }
  EXPECT_EQ(oracle.ledger().total, 1000u);
}

TEST(Oracle, HalfOverlapFrequency) {
  const auto t = two_points();
  lm::Oracle oracle;
  lm::Rng rng(2);
  int yes = 0;
  for (int i = 0; i < 10000; ++i) yes += oracle.query(t, 0, Point{0.0}, 0.5, rng).self_inside;
  EXPECT_NEAR(yes / 10000.0, 0.5, 0.02);
}

TEST(Oracle, BigBallIsYesPlus) {
  const auto t = two_points();
  lm::Oracle oracle;
  lm::Rng rng(3);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(oracle.query(t, 1, Point{5.0}, 20.0, rng).str(), "Y+");
}

TEST(Oracle, RejectsBadArguments) {
  const auto t = two_points();
  lm::Oracle oracle;
  lm::Rng rng(4);
  EXPECT_THROW(oracle.query(t, 0, Point{0.0}, 0.0, rng), std::invalid_argument);
  EXPECT_THROW(oracle.query(t, 5, Point{0.0}, 1.0, rng), std::out_of_range);
}

TEST(Oracle, DisjointObjectsNeverFlipOtherBit) {
  const auto t = lm::TruthState({Point{0.0}, Point{10.0}, Point{11.5}}, 0.1, 0.1, 100.0,
                                lm::DistributionFamily::uniform(1));
  lm::Oracle oracle;
  lm::Rng rng(5);
  // Ball (0, 5) is far from the features of objects 1 and 2.
  for (int i = 0; i < 5000; ++i) ASSERT_FALSE(oracle.query(t, 0, Point{0.0}, 5.0, rng).other_inside);
}

TEST(Oracle, FrequencyCalibrationOver20Geometries) {
  lm::Rng geo(6);
  lm::Rng rng(7);
  const auto t = two_points();
  for (int g = 0; g < 20; ++g) {
    const double c = geo.uniform(-1.5, 1.5);
    const double r = geo.uniform(0.05, 1.5);
    // Uniform on [-1, 1]: overlap of [c - r, c + r] with it, over 2.
    const double p = std::max(0.0, std::min(1.0, c + r) - std::max(-1.0, c - r)) / 2.0;
    lm::Oracle oracle;
    constexpr int kN = 10000;
    int yes = 0;
    for (int i = 0; i < kN; ++i) yes += oracle.query(t, 0, Point{c}, r, rng).self_inside;
    const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / kN);
    EXPECT_NEAR(static_cast<double>(yes) / kN, p, 3.0 * se + 1e-12) << "c=" << c << " r=" << r;
  }
}

TEST(Oracle, LedgerCountsOnePerCall) {
  const auto t = two_points();
  lm::Oracle oracle;
  lm::Rng rng(8);
  oracle.query(t, 0, Point{0.0}, 1.0, rng, lm::QueryKind::kZoomIn);
  oracle.query(t, 0, Point{0.0}, 1.0, rng, lm::QueryKind::kCoverScan);
  EXPECT_EQ(oracle.ledger().total, 2u);
  EXPECT_EQ(oracle.ledger().this_unit, 2u);
  EXPECT_EQ(oracle.ledger().per_kind[1], 1u);
  EXPECT_EQ(oracle.ledger().per_kind[2], 1u);
  EXPECT_LE(oracle.ledger().samples_drawn, 2u * t.size());
  oracle.begin_unit();
  EXPECT_EQ(oracle.ledger().this_unit, 0u);
  EXPECT_EQ(oracle.ledger().support_violations, 0u);
}
