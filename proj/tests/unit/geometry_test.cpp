#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "localmotion/geometry.hpp"
#include "localmotion/rng.hpp"

namespace lm = localmotion;
using lm::Ball;
using lm::Point;

namespace {

std::vector<Point> line(std::initializer_list<double> xs) {
  std::vector<Point> out;
  for (double x : xs) out.push_back(Point{x});
  return out;
}

double brute_nn(const std::vector<Point>& pts, std::size_t i) {
  double best = INFINITY;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j == i) continue;
    double acc = 0.0;
    for (std::size_t k = 0; k < pts[i].dim(); ++k) acc += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
    best = std::min(best, std::sqrt(acc));
  }
  return best;
}

}  // namespace

TEST(NearestNeighbor, OneDimensionalExamples) {
  const auto pts = line({0, 1, 5});
  EXPECT_DOUBLE_EQ(lm::nearest_neighbor_distance(pts, 0), 1.0);
  EXPECT_DOUBLE_EQ(lm::nearest_neighbor_distance(pts, 2), 4.0);
  EXPECT_EQ(lm::nearest_neighbor_index(pts, 2), 1u);
  EXPECT_DOUBLE_EQ(lm::min_pairwise_distance(pts), 1.0);
}

TEST(NearestNeighbor, NeedsTwoPoints) {
  const auto pts = line({3});
  EXPECT_THROW(lm::nearest_neighbor_distance(pts, 0), std::invalid_argument);
  EXPECT_THROW(lm::min_pairwise_distance(pts), std::invalid_argument);
}

TEST(NearestNeighbor, MatchesBruteForceIn2d) {
  lm::Rng rng(5);
  std::vector<Point> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(Point{rng.uniform(-10, 10), rng.uniform(-10, 10)});
  double global = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_NEAR(lm::nearest_neighbor_distance(pts, i), brute_nn(pts, i), 1e-12);
    global = std::min(global, brute_nn(pts, i));
  }
  EXPECT_NEAR(lm::min_pairwise_distance(pts), global, 1e-12);
}

TEST(NearestNeighbor, PairLayoutMinimumIsOne) {
  std::vector<Point> pts;
  for (int i = 1; i <= 20; ++i) {
    pts.push_back(Point{100.0 * i});
    pts.push_back(Point{100.0 * i + 1});
  }
  EXPECT_DOUBLE_EQ(lm::min_pairwise_distance(pts), 1.0);
}

TEST(NearestNeighbor, RelabelTranslateScale) {
  lm::Rng rng(9);
  std::vector<Point> pts;
  for (int i = 0; i < 40; ++i) pts.push_back(Point{rng.uniform(), rng.uniform(), rng.uniform()});
  std::vector<double> base;
  for (std::size_t i = 0; i < pts.size(); ++i) base.push_back(lm::nearest_neighbor_distance(pts, i));

  std::vector<Point> reversed(pts.rbegin(), pts.rend());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_DOUBLE_EQ(lm::nearest_neighbor_distance(reversed, pts.size() - 1 - i), base[i]);
  }
  const Point shift{4.0, -2.0, 7.5};
  const double c = 3.25;
  std::vector<Point> moved;
  for (const Point& p : pts) moved.push_back(p * c + shift);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_NEAR(lm::nearest_neighbor_distance(moved, i), c * base[i], 1e-12 * c * base[i]);
  }
}

TEST(BallContains, ClosedBoundary) {
  EXPECT_TRUE(lm::ball_contains(Ball{Point{0.0}, 1.0}, Point{1.0}));
  EXPECT_FALSE(lm::ball_contains(Ball{Point{0.0}, 1.0}, Point{1.0000001}));
  EXPECT_TRUE(lm::ball_contains(Ball{Point{0.0, 0.0}, 5.0}, Point{3.0, 4.0}));
}

TEST(BallRelations, IntersectAndWithin) {
  EXPECT_TRUE(lm::balls_intersect(Ball{Point{0.0}, 1.0}, Ball{Point{2.0}, 1.0}));
  EXPECT_FALSE(lm::balls_intersect(Ball{Point{0.0}, 1.0}, Ball{Point{2.5}, 1.0}));
  EXPECT_TRUE(lm::ball_within(Ball{Point{1.0}, 1.0}, Ball{Point{0.0}, 2.0}));
  EXPECT_FALSE(lm::ball_within(Ball{Point{1.5}, 1.0}, Ball{Point{0.0}, 2.0}));
}

TEST(UnitBallVolume, KnownValues) {
  EXPECT_DOUBLE_EQ(lm::unit_ball_volume(1), 2.0);
  EXPECT_NEAR(lm::unit_ball_volume(2), std::numbers::pi, 1e-14);
  EXPECT_NEAR(lm::unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
  EXPECT_NEAR(lm::unit_ball_volume(4), std::numbers::pi * std::numbers::pi / 2.0, 1e-13);
}

TEST(CoverBall, IntervalTiling) {
  const auto cover = lm::cover_ball(Ball{Point{0.0}, 4.0}, 1.0);
  ASSERT_EQ(cover.size(), 4u);
  const double expected[] = {-3, -1, 1, 3};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(cover[k].center[0], expected[k], 1e-12);
    EXPECT_DOUBLE_EQ(cover[k].radius, 1.0);
  }
}

TEST(CoverBall, IdentityCover) {
  const Ball b{Point{1.0, 2.0}, 3.0};
  const auto cover = lm::cover_ball(b, 3.0);
  ASSERT_EQ(cover.size(), 1u);
  EXPECT_EQ(cover[0].center, b.center);
}

TEST(CoverBall, RejectsBadRadius) {
  EXPECT_THROW(lm::cover_ball(Ball{Point{0.0}, 1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(lm::cover_ball(Ball{Point{0.0}, 1.0}, -1.0), std::invalid_argument);
}

TEST(CoverBall, AlgorithmRatioIn2d) {
  // beta = 0.1: ceil(3 / (1 - 2 beta)) = 4, bound (2 * 4 * sqrt 2)^2 = 128.
  const auto cover = lm::cover_ball(Ball{Point{0.0, 0.0}, 1.0}, 0.25);
  EXPECT_NEAR(lm::cover_cardinality_bound(2, 4.0), 128.0, 1e-9);
  EXPECT_LE(static_cast<double>(cover.size()), 128.0);
}

TEST(CoverBall, SoundnessAndCardinalityGrid) {
  lm::Rng rng(11);
  for (std::size_t d = 1; d <= 3; ++d) {
    for (int ratio = 2; ratio <= 8; ++ratio) {
      Point c(d);
      for (std::size_t k = 0; k < d; ++k) c[k] = rng.uniform(-5, 5);
      const Ball b{c, 2.0};
      const double r = b.radius / ratio;
      const auto cover = lm::cover_ball(b, r);
      EXPECT_LE(static_cast<double>(cover.size()), lm::cover_cardinality_bound(d, ratio))
          << "d=" << d << " ratio=" << ratio;
      for (const Ball& cell : cover) {
        EXPECT_DOUBLE_EQ(cell.radius, r);
        EXPECT_TRUE(lm::balls_intersect(cell, b));
      }
      const int probes = d == 1 ? 2000 : 5000;
      for (int p = 0; p < probes; ++p) {
        const Point x = c + rng.in_unit_ball(d) * b.radius;
        bool hit = false;
        for (const Ball& cell : cover) {
          if (lm::ball_contains(Ball{cell.center, cell.radius * (1 + 1e-12)}, x)) {
            hit = true;
            break;
          }
        }
        ASSERT_TRUE(hit) << "uncovered point " << lm::to_string(x);
      }
    }
  }
}

TEST(CoverBall, SoundnessManyProbes2d) {
  lm::Rng rng(12);
  const Ball b{Point{0.3, -0.7}, 1.0};
  const auto cover = lm::cover_ball(b, 0.125);
  for (int p = 0; p < 100000; ++p) {
    const Point x = b.center + rng.in_unit_ball(2) * b.radius;
    bool hit = false;
    for (const Ball& cell : cover) {
      if (lm::ball_contains(Ball{cell.center, cell.radius * (1 + 1e-12)}, x)) {
        hit = true;
        break;
      }
    }
    ASSERT_TRUE(hit);
  }
}

TEST(Point, FiniteAndArithmetic) {
  Point a{1.0, 2.0};
  Point b{3.0, -1.0};
  EXPECT_EQ(a + b, (Point{4.0, 1.0}));
  EXPECT_DOUBLE_EQ(lm::dot(a, b), 1.0);
  EXPECT_DOUBLE_EQ(lm::squared_distance(a, b), 13.0);
  EXPECT_TRUE(a.finite());
  a[0] = NAN;
  EXPECT_FALSE(a.finite());
}
