#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "localmotion/evolver.hpp"
#include "localmotion/metrics.hpp"
#include "localmotion/tracker.hpp"

namespace lm = localmotion;
using lm::Point;

namespace {

struct Recorder : lm::TrackerObserver {
  std::vector<lm::ExpansionEvent> expansions;
  std::vector<lm::CompletionEvent> completions;
  std::vector<std::size_t> changes;
  void on_expansion(const lm::ExpansionEvent& e) override { expansions.push_back(e); }
  void on_completion(const lm::CompletionEvent& e) override { completions.push_back(e); }
  void on_hypothesis_change(std::size_t i) override { changes.push_back(i); }
};

lm::TruthState spread_truth(std::size_t n, std::uint64_t seed, std::size_t d = 1) {
  lm::Rng rng(seed);
  std::vector<Point> pts;
  while (pts.size() < n) {
    const Point x = rng.in_unit_ball(d) * 400.0;
    bool ok = true;
    for (const Point& p : pts) ok = ok && lm::distance(p, x) > 2.0;
    if (ok) pts.push_back(x);
  }
  return lm::TruthState(pts, 0.1, 0.1, 500.0, lm::DistributionFamily::uniform(d));
}

}  // namespace

TEST(Hypothesis, InitialState) {
  const auto hyp = lm::init_hypothesis(4, lm::Ball{Point{0.0}, 100.0});
  ASSERT_EQ(hyp.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(hyp.centers[i], Point{0.0});
    EXPECT_DOUBLE_EQ(hyp.scales[i], 100.0);
  }
  EXPECT_NEAR(lm::object_potential(0.0, 1.0, 100.0), 2.302585, 1e-6);
  EXPECT_THROW(lm::init_hypothesis(1, lm::Ball{Point{0.0}, 1.0}), std::invalid_argument);
}

TEST(Hypothesis, CauchyDensityValues) {
  EXPECT_NEAR(lm::cauchy_density(Point{0.0}, 1.0, Point{0.0}), 1.0 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(lm::cauchy_density(Point{0.0}, 1.0, Point{1.0}), 0.5 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(lm::cauchy_density(Point{0.0, 0.0}, 2.0, Point{0.0, 0.0}), 0.025330, 1e-6);
  const Point k{0.3, -1.0}, x{2.0, 5.0};
  EXPECT_NEAR(std::log(lm::cauchy_density(k, 0.7, x)), lm::log_cauchy_density(k, 0.7, x), 1e-12);
}

TEST(TrackByZoom, FirstZoomOutExpandsBy375) {
  lm::TruthState t({Point{0.0}, Point{10.0}}, 0.1, 0.1, 100.0, lm::DistributionFamily::uniform(1));
  lm::TrackByZoom tracker(2, t.bounding(), {0.1, 3.0});
  lm::Oracle oracle;
  lm::Rng rng(1);
  Recorder rec;
  EXPECT_DOUBLE_EQ(tracker.expansion_factor(), 3.75);
  EXPECT_DOUBLE_EQ(tracker.cover_ratio(), 8.0);
  tracker.step(t, oracle, rng, &rec);
  EXPECT_TRUE(tracker.awaiting_second());
  EXPECT_EQ(tracker.phase(), lm::Phase::kZoomOut);
  tracker.step(t, oracle, rng, &rec);
  EXPECT_EQ(tracker.phase(), lm::Phase::kZoomIn);
  EXPECT_DOUBLE_EQ(tracker.hypothesis().scales[0], 375.0);
  ASSERT_EQ(rec.expansions.size(), 1u);
  EXPECT_TRUE(rec.expansions[0].same_state);
  EXPECT_TRUE(lm::ball_within(t.local_feature(0), rec.expansions[0].claimed));
  EXPECT_EQ(tracker.steps(), 2u);
  EXPECT_EQ(oracle.ledger().total, 2u);
}

TEST(TrackByZoom, DormantCompletionsRespectBound) {
  auto t = spread_truth(12, 3);
  lm::TrackByZoom tracker(t.size(), t.bounding(), {0.1, 3.0});
  lm::Oracle oracle;
  lm::Rng rng(2);
  Recorder rec;
  const double phi0 = lm::completion_potential_bound(0.1);
  EXPECT_NEAR(phi0, 1.24245, 1e-5);
  while (tracker.iterations() < 3) {
    const std::size_t before = rec.completions.size();
    tracker.step(t, oracle, rng, &rec);
    if (rec.completions.size() != before) {
      const std::size_t i = rec.completions.back().index;
      EXPECT_LE(lm::object_potential(t, tracker.hypothesis(), i), phi0 + 1e-9);
    }
    ASSERT_LT(tracker.steps(), 200000u);
  }
  EXPECT_EQ(rec.completions.size(), 3 * t.size());
  for (const auto& e : rec.expansions) {
    EXPECT_TRUE(lm::ball_within(t.local_feature(e.index), e.claimed, 1e-9));
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_LE(lm::object_potential(t, tracker.hypothesis(), i), phi0 + 1e-9);
  }
}

TEST(TrackByZoom, TransitionRules) {
  // Random motion makes zoom-outs and cover-scan misses happen.
  auto t = spread_truth(16, 4, 2);
  lm::TrackByZoom tracker(t.size(), t.bounding(), {0.1, 3.0});
  lm::Oracle oracle;
  lm::Rng rng(3), evo(4);
  lm::RandomStrategy random;
  const double bound = lm::cover_cardinality_bound(2, tracker.cover_ratio());
  int zoom_out_pairs = 0, cover_hits = 0;
  for (int s = 0; s < 60000; ++s) {
    if (s % 4 == 0) {
      const lm::AdversaryView view{t, tracker.hypothesis(), tracker.modified_at(), tracker.steps(),
                                   tracker.current_index(), static_cast<std::uint64_t>(s)};
      if (auto step = random.propose(view, evo)) lm::apply_step(t, *step);
    }
    const std::size_t i = tracker.current_index();
    const lm::Phase phase = tracker.phase();
    const bool second = tracker.awaiting_second();
    const double h = tracker.hypothesis().scales[i];
    tracker.step(t, oracle, rng);
    const double h_new = tracker.hypothesis().scales[i];
    if (phase == lm::Phase::kZoomOut && second) {
      ++zoom_out_pairs;
      const double ratio = h_new / h;
      EXPECT_TRUE(std::abs(ratio - 2.0) < 1e-12 || std::abs(ratio - 3.75) < 1e-12) << ratio;
      if (std::abs(ratio - 2.0) < 1e-12) EXPECT_EQ(tracker.phase(), lm::Phase::kZoomOut);
    } else if (phase == lm::Phase::kZoomOut) {
      EXPECT_EQ(h_new, h);
    } else if (phase == lm::Phase::kZoomIn) {
      EXPECT_EQ(h_new, h);
      if (tracker.phase() == lm::Phase::kCoverScan) {
        EXPECT_LE(static_cast<double>(tracker.cover_size()), bound);
      }
    } else if (h_new != h) {
      ++cover_hits;
      EXPECT_LE(h_new, 0.5 * h * (1 + 1e-12));
      EXPECT_EQ(tracker.phase(), lm::Phase::kZoomIn);
    }
  }
  EXPECT_GT(zoom_out_pairs, 0);
  EXPECT_GT(cover_hits, 0);
}

TEST(TrackByZoom, CoverHitAtLeastHalvesScale) {
  // 3 r / (1 - 2 beta) with r = h / (2 ceil(3 / (1 - 2 beta))) is at most h / 2.
  for (double beta : {0.01, 0.1, 0.2, 0.3, 0.33}) {
    lm::TrackByZoom tracker(2, lm::Ball{Point{0.0}, 1.0}, {beta, 3.0});
    EXPECT_LE(tracker.expansion_factor() / tracker.cover_ratio(), 0.5 + 1e-15) << beta;
  }
}

TEST(TrackByZoom, OneQueryPerStep) {
  auto t = spread_truth(8, 5);
  lm::TrackByZoom tracker(t.size(), t.bounding(), {0.1, 3.0});
  lm::Oracle oracle;
  lm::Rng rng(6);
  for (int s = 1; s <= 5000; ++s) {
    tracker.step(t, oracle, rng);
    ASSERT_EQ(oracle.ledger().total, static_cast<std::uint64_t>(s));
  }
}

TEST(TrackByZoom, PhaseNames) {
  EXPECT_EQ(lm::to_string(lm::Phase::kZoomOut), "ZOOM_OUT");
  EXPECT_EQ(lm::to_string(lm::Phase::kZoomIn), "ZOOM_IN");
  EXPECT_EQ(lm::to_string(lm::Phase::kCoverScan), "COVER_SCAN");
}
