#include "localmotion/tracker.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace localmotion {

Hypothesis init_hypothesis(std::size_t n, const Ball& bounding) {
  if (n < 2) throw std::invalid_argument("a hypothesis needs at least two objects");
  Hypothesis hyp;
  hyp.centers.assign(n, Point(bounding.center.dim()));
  hyp.scales.assign(n, bounding.radius);
  return hyp;
}

double log_cauchy_density(const Point& center, double scale, const Point& x) {
  const std::size_t d = x.dim();
  double acc = -static_cast<double>(d) * std::log(std::numbers::pi * scale);
  for (std::size_t k = 0; k < d; ++k) {
    const double u = (x[k] - center[k]) / scale;
    acc -= std::log1p(u * u);
  }
  return acc;
}

double cauchy_density(const Point& center, double scale, const Point& x) {
  double acc = 1.0;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    const double u = (x[k] - center[k]) / scale;
    acc /= std::numbers::pi * scale * (1.0 + u * u);
  }
  return acc;
}

double hypothesis_density(const Hypothesis& hyp, std::size_t i, const Point& x) {
  return cauchy_density(hyp.centers.at(i), hyp.scales.at(i), x);
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kZoomOut: return "ZOOM_OUT";
    case Phase::kZoomIn: return "ZOOM_IN";
    case Phase::kCoverScan: return "COVER_SCAN";
  }
  return "?";
}

TrackByZoom::TrackByZoom(std::size_t n, const Ball& bounding, TrackerOptions options)
    : options_(options), hyp_(init_hypothesis(n, bounding)), modified_at_(n, 0) {
  if (!(options_.beta > 0.0 && options_.beta < 0.5)) {
    throw std::invalid_argument("tracker needs 0 < beta < 1/2");
  }
  const double shrink = 1.0 - 2.0 * options_.beta;
  expansion_ = options_.expansion_numerator / shrink;
  cover_ratio_ = 2.0 * std::ceil(3.0 / shrink);
}

void TrackByZoom::set_scale(std::size_t i, double h, TrackerObserver* observer) {
  hyp_.scales[i] = h;
  modified_at_[i] = steps_;
  if (observer) observer->on_hypothesis_change(i);
}

void TrackByZoom::set_ball(std::size_t i, const Point& k, double h, TrackerObserver* observer) {
  hyp_.centers[i] = k;
  set_scale(i, h, observer);
}

void TrackByZoom::step(const TruthState& truth, Oracle& oracle, Rng& rng,
                       TrackerObserver* observer) {
  ++steps_;
  const std::size_t i = index_;
  const Point k = hyp_.centers[i];
  const double h = hyp_.scales[i];
  const double beta = options_.beta;

  switch (phase_) {
    case Phase::kZoomOut:
    case Phase::kZoomIn: {
      const QueryKind kind =
          phase_ == Phase::kZoomOut ? QueryKind::kZoomOut : QueryKind::kZoomIn;
      if (!have_first_) {
        first_ = oracle.query(truth, i, k, h, rng, kind);
        have_first_ = true;
        return;
      }
      const OracleResponse second = oracle.query(truth, i, k, h / beta, rng, kind);
      have_first_ = false;
      const bool same_state = first_.truth_version == second.truth_version;
      const bool neighbor_seen = second.self_inside && second.other_inside;

      if (phase_ == Phase::kZoomOut) {
        if (first_.self_inside && neighbor_seen) {
          set_scale(i, expansion_ * h, observer);
          if (observer) {
            observer->on_expansion({i, Phase::kZoomOut, hyp_.ball(i), same_state});
          }
          phase_ = Phase::kZoomIn;
        } else {
          set_scale(i, 2.0 * h, observer);
        }
        return;
      }

      if (!first_.self_inside) {
        phase_ = Phase::kZoomOut;
      } else if (second.self_inside && !second.other_inside) {
        ++completions_;
        if (observer) observer->on_completion({i, same_state});
        index_ = (index_ + 1) % hyp_.size();
        if (index_ == 0) ++iterations_;
        phase_ = Phase::kZoomOut;
      } else if (neighbor_seen) {
        if (observer) {
          observer->on_expansion({i, Phase::kZoomIn, Ball{k, expansion_ * h}, same_state});
        }
        cover_ = cover_ball(Ball{k, h}, h / cover_ratio_);
        cover_pos_ = 0;
        phase_ = Phase::kCoverScan;
      }
      return;
    }
    case Phase::kCoverScan: {
      const Ball& cell = cover_[cover_pos_++];
      const OracleResponse r =
          oracle.query(truth, i, cell.center, cell.radius, rng, QueryKind::kCoverScan);
      if (r.self_inside) {
        set_ball(i, cell.center, expansion_ * cell.radius, observer);
        phase_ = Phase::kZoomIn;
      } else if (cover_pos_ == cover_.size()) {
        phase_ = Phase::kZoomIn;
      }
      if (phase_ == Phase::kZoomIn) {
        cover_.clear();
        cover_pos_ = 0;
      }
      return;
    }
  }
}

}  // namespace localmotion
