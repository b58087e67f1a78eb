#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "localmotion/metrics.hpp"
#include "localmotion/quadrature.hpp"

namespace lm = localmotion;
using lm::Point;

namespace {

lm::TruthState pair_1d(double q, double l, lm::FamilyKind kind = lm::FamilyKind::kUniformBall) {
  // Neighbor at distance 10 l / beta with beta = 0.1 gives l_0 = l.
  return lm::TruthState({Point{q}, Point{q + 10.0 * l}}, 0.1, 0.1, std::abs(q) + 20.0 * l + 1.0,
                        lm::DistributionFamily::make(kind, 1, 0.5));
}

lm::Hypothesis hyp_1d(double k, double h) {
  lm::Hypothesis hyp;
  hyp.centers = {Point{k}, Point{0.0}};
  hyp.scales = {h, 1.0};
  return hyp;
}

// Independent reference: brute midpoint rule on the interval.
double kl_midpoint(double q, double l, double k, double h) {
  constexpr int kN = 200000;
  double acc = 0.0;
  for (int j = 0; j < kN; ++j) {
    const double x = q - l + (j + 0.5) * (2.0 * l / kN);
    const double u = (x - k) / h;
    acc += std::log(1.0 / (2.0 * l)) - std::log(1.0 / (std::numbers::pi * h * (1.0 + u * u)));
  }
  return acc / kN;
}

}  // namespace

TEST(Potential, Examples) {
  EXPECT_DOUBLE_EQ(lm::object_potential(1, 1, 1), 0.0);
  EXPECT_NEAR(lm::object_potential(8, 2, 1), 1.73287, 1e-5);
  EXPECT_DOUBLE_EQ(lm::object_potential(3, 2, 0.5), lm::object_potential(3, 0.5, 2));
  lm::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double s = rng.uniform(0, 10), l = rng.uniform(0.01, 10), h = rng.uniform(0.01, 10);
    EXPECT_GE(lm::object_potential(s, l, h), 0.0);
  }
}

TEST(Potential, BreakdownAndLedger) {
  lm::TruthState t({Point{0.0}, Point{10.0}, Point{30.0}}, 0.1, 0.1, 100.0,
                   lm::DistributionFamily::uniform(1));
  lm::Hypothesis hyp;
  hyp.centers = {Point{1.0}, Point{9.0}, Point{0.0}};
  hyp.scales = {2.0, 1.0, 100.0};
  const auto b = lm::potential(t, hyp);
  EXPECT_DOUBLE_EQ(b.s[0], 1.0);
  EXPECT_DOUBLE_EQ(b.l[2], 2.0);
  EXPECT_NEAR(b.total, b.phi[0] + b.phi[1] + b.phi[2], 1e-14);
  EXPECT_DOUBLE_EQ(b.max, std::max({b.phi[0], b.phi[1], b.phi[2]}));
  lm::PotentialLedger ledger(t, hyp);
  EXPECT_NEAR(ledger.total(), b.total, 1e-14);
  hyp.scales[2] = 4.0;
  const double delta = ledger.refresh(t, hyp, 2);
  EXPECT_NEAR(ledger.total(), lm::potential(t, hyp).total, 1e-12);
  EXPECT_NEAR(delta, lm::object_potential(30.0, 2.0, 4.0) - b.phi[2], 1e-12);
}

TEST(Potential, InitialPotential) {
  lm::TruthState t({Point{0.0}, Point{10.0}, Point{-20.0}}, 0.1, 0.1, 100.0,
                   lm::DistributionFamily::uniform(1));
  const auto hyp = lm::init_hypothesis(3, t.bounding());
  EXPECT_NEAR(lm::potential(t, hyp).total, lm::initial_potential(t), 1e-12);
  // l = 1, 1, 2.
  EXPECT_NEAR(lm::initial_potential(t), std::log(100.0) + 0.5 * std::log(50.0), 1e-12);
}

TEST(KlExact, HandDerivedValue) {
  EXPECT_NEAR(lm::kl_exact_1d(0, 1, 0, 1), std::log(std::numbers::pi) - 2.0 + std::numbers::pi / 2.0,
              1e-15);
  EXPECT_NEAR(lm::kl_exact_1d(0, 1, 0, 1), 0.71552, 1e-5);
}

TEST(KlExact, MatchesMidpointOracle) {
  lm::Rng rng(2);
  for (int c = 0; c < 30; ++c) {
    const double q = rng.uniform(-5, 5), l = rng.uniform(0.05, 3), k = rng.uniform(-5, 5);
    const double h = std::exp(rng.uniform(-4, 4));
    EXPECT_NEAR(lm::kl_exact_1d(q, l, k, h), kl_midpoint(q, l, k, h), 1e-7);
  }
}

TEST(KlExact, NarrowIntervalsAvoidCancellation) {
  // u-width 1e-6: the antiderivative difference would lose all digits.
  const double v = lm::kl_exact_1d(1e6, 1.0, 0.0, 2e6);
  const double u = 0.5;
  EXPECT_NEAR(v, std::log(std::numbers::pi * 2e6 / 2.0) + std::log1p(u * u), 1e-9);
}

TEST(KlExact, MonotoneInOffsetAndDivergesInScale) {
  double prev = lm::kl_exact_1d(0, 1, 0, 1.5);
  for (double c = 0.25; c <= 20; c += 0.25) {
    const double v = lm::kl_exact_1d(0, 1, c, 1.5);
    EXPECT_GE(v, prev - 1e-12);
    prev = v;
  }
  const double a = lm::kl_exact_1d(0, 1, 0, 1e6), b = lm::kl_exact_1d(0, 1, 0, 1e7);
  EXPECT_NEAR(b - a, std::log(10.0), 1e-6);
}

TEST(KlExact, RejectsNonUniformTruth) {
  const auto t = pair_1d(0, 1, lm::FamilyKind::kTruncatedNormal);
  EXPECT_THROW(lm::kl_exact_1d(t, hyp_1d(0, 1), 0), std::invalid_argument);
  EXPECT_THROW(lm::kl_exact_1d(0, 0, 0, 1), std::invalid_argument);
}

TEST(KlMonteCarlo, AgreesWithClosedForm) {
  const auto t = pair_1d(0, 1);
  lm::Rng rng(3);
  const auto e = lm::kl_monte_carlo(t, hyp_1d(0, 1), 0, 1000000, rng);
  EXPECT_NEAR(e.value, 0.71552, 3.0 * e.std_error);
  EXPECT_EQ(e.method, lm::KLMethod::kMonteCarlo);
  EXPECT_EQ(e.samples, 1000000u);
}

TEST(KlMonteCarlo, NearlyConstantIntegrand) {
  const auto t = pair_1d(0, 1);
  lm::Rng rng(4);
  const auto e = lm::kl_monte_carlo(t, hyp_1d(0, 1e6), 0, 1000, rng);
  EXPECT_LT(e.std_error, 1e-10);
  EXPECT_NEAR(e.value, std::log(std::numbers::pi * 1e6 / 2.0), 1e-9);
}

TEST(KlMonteCarlo, StandardErrorScaling) {
  const auto t = pair_1d(2, 0.7);
  const auto hyp = hyp_1d(1.5, 0.4);
  lm::Rng rng(5);
  double prev = lm::kl_monte_carlo(t, hyp, 0, 4000, rng).std_error;
  for (std::uint64_t n = 16000; n <= 256000; n *= 4) {
    const double se = lm::kl_monte_carlo(t, hyp, 0, n, rng).std_error;
    EXPECT_NEAR(se / prev, 0.5, 0.1) << n;
    prev = se;
  }
}

TEST(KlQuadrature, OneDimensionalMatchesExact) {
  lm::Rng rng(6);
  for (int c = 0; c < 20; ++c) {
    const double q = rng.uniform(-3, 3), l = rng.uniform(0.1, 2);
    const double k = q + rng.uniform(-3, 3), h = std::exp(rng.uniform(-2, 3));
    const auto t = pair_1d(q, l);
    EXPECT_NEAR(lm::kl_quadrature(t, hyp_1d(k, h), 0).value, lm::kl_exact_1d(q, l, k, h), 1e-8);
  }
}

TEST(KlQuadrature, TwoDimensionalMatchesMonteCarlo) {
  lm::TruthState t({Point{0.0, 0.0}, Point{10.0, 0.0}}, 0.1, 0.1, 50.0,
                   lm::DistributionFamily::uniform(2));
  lm::Hypothesis hyp;
  hyp.centers = {Point{0.4, -0.3}, Point{10.0, 0.0}};
  hyp.scales = {0.8, 1.0};
  lm::Rng rng(7);
  const auto mc = lm::kl_monte_carlo(t, hyp, 0, 400000, rng);
  const auto quad = lm::kl_quadrature(t, hyp, 0);
  EXPECT_NEAR(quad.value, mc.value, 4.0 * mc.std_error);
  // Uniform disk: closed form of the entropy term, reference by polar quadrature.
  const double l = 1.0;
  const double polar = lm::integrate(
      [&](double r) {
        return lm::integrate(
            [&](double th) {
              const Point x{r * std::cos(th), r * std::sin(th)};
              const double p = 1.0 / (std::numbers::pi * l * l);
              return r * p * (std::log(p) - lm::log_cauchy_density(hyp.centers[0], 0.8, x));
            },
            0.0, 2.0 * std::numbers::pi, 16, 20);
      },
      0.0, l, 16, 20);
  EXPECT_NEAR(quad.value, polar, 1e-7);
}

TEST(KlUpperBound, ExamplesAndSymmetry) {
  EXPECT_NEAR(lm::kl_upper_bound(0, 1, 1, 1), std::log(2 * std::numbers::pi) + std::log(2.0), 1e-14);
  EXPECT_NEAR(lm::kl_upper_bound(0, 1, 1, 1), 2.5310, 1e-4);
  EXPECT_GE(lm::kl_upper_bound(0, 1, 1, 1), lm::kl_exact_1d(0, 1, 0, 1));
  EXPECT_NEAR(lm::kl_upper_bound(0, 1, 1, 2), 4.82048, 1e-5);
  EXPECT_DOUBLE_EQ(lm::kl_upper_bound(0, 2, 3, 1), lm::kl_upper_bound(0, 3, 2, 1));
}

TEST(KlUpperBound, DominatesEstimates) {
  lm::Rng rng(8);
  for (int c = 0; c < 1000; ++c) {
    const std::size_t d = 1 + rng.index(2);
    const double l = std::exp(rng.uniform(-2, 1));
    const double h = std::exp(rng.uniform(-3, 3));
    const double s = rng.uniform(0, 5);
    Point q(d), k(d), other(d);
    other[0] = 10.0 * l;
    k = q + rng.unit_direction(d) * s;
    lm::TruthState t({q, other}, 0.1, 0.1, 20.0 * l + 1.0, lm::DistributionFamily::uniform(d));
    lm::Hypothesis hyp;
    hyp.centers = {k, other};
    hyp.scales = {h, 1.0};
    const double est = d == 1 ? lm::kl_exact_1d(t, hyp, 0) : lm::kl_monte_carlo(t, hyp, 0, 200, rng).value;
    EXPECT_LE(est, lm::kl_upper_bound(s, l, h, d)) << "s=" << s << " l=" << l << " h=" << h;
  }
}

TEST(NaiveBound, Examples) {
  EXPECT_NEAR(lm::naive_distance_bound(100, 0.1, 1), std::log(100.0) + std::log(30.0), 1e-14);
  EXPECT_NEAR(lm::naive_distance_bound(100, 0.1, 1), 8.00637, 1e-5);
  EXPECT_THROW(lm::naive_distance_bound(1, 3, 1), std::invalid_argument);
  EXPECT_THROW(lm::naive_distance_bound(0.5, 0.1, 1), std::invalid_argument);
  EXPECT_NEAR(lm::naive_distance_bound(100 * std::numbers::e, 0.1, 3) - lm::naive_distance_bound(100, 0.1, 3),
              3.0, 1e-12);
}

TEST(PairwiseRatio, IdentityAndBruteForce) {
  lm::Rng rng(9);
  std::vector<Point> pts;
  for (int i = 0; i < 15; ++i) pts.push_back(Point{rng.uniform(-50, 50), rng.uniform(-50, 50)});
  lm::TruthState t(pts, 0.1, 0.1, 100.0, lm::DistributionFamily::uniform(2));
  lm::Hypothesis hyp;
  hyp.centers = pts;
  hyp.scales.assign(pts.size(), 1.0);
  const auto same = lm::pairwise_ratio(t, hyp);
  EXPECT_DOUBLE_EQ(same.min, 1.0);
  EXPECT_DOUBLE_EQ(same.max, 1.0);
  for (auto& c : hyp.centers) c = c + rng.in_unit_ball(2) * 3.0;
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const double r = lm::distance(hyp.centers[i], hyp.centers[j]) / lm::distance(pts[i], pts[j]);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  const auto r = lm::pairwise_ratio(t, hyp);
  EXPECT_DOUBLE_EQ(r.min, lo);
  EXPECT_DOUBLE_EQ(r.max, hi);
}

TEST(PairwiseRatio, Bracket) {
  const double phi0 = lm::completion_potential_bound(0.1);
  const auto b = lm::pairwise_ratio_bracket(0.1, phi0);
  // c^2 = 9 (1.2 / 0.9) = 12.
  EXPECT_NEAR(b.max, 1.0 + 2.0 * 0.1 * 12.0, 1e-12);
  EXPECT_DOUBLE_EQ(b.min, 0.0);
  const auto tight = lm::pairwise_ratio_bracket(0.01, 0.0);
  EXPECT_NEAR(tight.min, 0.98, 1e-12);
  EXPECT_NEAR(tight.max, 1.02, 1e-12);
}

TEST(CompletionBound, Value) {
  EXPECT_NEAR(lm::completion_potential_bound(0.1), std::log(3.0 * std::sqrt(1.2 / 0.9)), 1e-15);
  EXPECT_NEAR(lm::completion_potential_bound(0.1), 1.24245, 1e-5);
}
