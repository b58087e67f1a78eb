#include "localmotion/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "localmotion/quadrature.hpp"

namespace localmotion {

double object_potential(double s, double l, double h) {
  return std::log(std::max({s, l, h}) / std::sqrt(l * h));
}

double object_potential(const TruthState& truth, const Hypothesis& hyp, std::size_t i) {
  const double s = distance(truth.center(i), hyp.centers.at(i));
  return object_potential(s, truth.feature_radius(i), hyp.scales.at(i));
}

PotentialBreakdown potential(const TruthState& truth, const Hypothesis& hyp) {
  if (truth.size() != hyp.size()) throw std::invalid_argument("potential: size mismatch");
  PotentialBreakdown out;
  const std::size_t n = truth.size();
  out.s.resize(n);
  out.l.resize(n);
  out.h.resize(n);
  out.phi.resize(n);
  out.max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    out.s[i] = distance(truth.center(i), hyp.centers[i]);
    out.l[i] = truth.feature_radius(i);
    out.h[i] = hyp.scales[i];
    out.phi[i] = object_potential(out.s[i], out.l[i], out.h[i]);
    out.total += out.phi[i];
    out.max = std::max(out.max, out.phi[i]);
  }
  return out;
}

PotentialLedger::PotentialLedger(const TruthState& truth, const Hypothesis& hyp)
    : phi_(potential(truth, hyp).phi) {
  for (double v : phi_) total_ += v;
}

double PotentialLedger::refresh(const TruthState& truth, const Hypothesis& hyp,
                                std::size_t i) {
  const double fresh = object_potential(truth, hyp, i);
  const double delta = fresh - phi_.at(i);
  phi_[i] = fresh;
  total_ += delta;
  return delta;
}

double PotentialLedger::max() const { return *std::max_element(phi_.begin(), phi_.end()); }

double completion_potential_bound(double beta) {
  return std::log(3.0 * std::sqrt((1.0 + 2.0 * beta) / (1.0 - beta)));
}

double initial_potential(const TruthState& truth) {
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    acc += 0.5 * std::log(truth.bounding_radius() / truth.feature_radius(i));
  }
  return acc;
}

std::string_view to_string(KLMethod method) {
  switch (method) {
    case KLMethod::kExact1d: return "exact-1d";
    case KLMethod::kMonteCarlo: return "monte-carlo";
    case KLMethod::kQuadrature: return "quadrature";
  }
  return "?";
}

namespace {

// Antiderivative of ln(1 + u^2).
double log1p_sq_antiderivative(double u) {
  return u * std::log1p(u * u) - 2.0 * u + 2.0 * std::atan(u);
}

// Mean of ln(1 + u^2) over [a, b].
double mean_log1p_sq(double a, double b) {
  const double width = b - a;
  if (width <= 1.0) {
    // Poles at +-i sit at least one width away, so a fixed rule is exact to
    // rounding and avoids cancellation in the antiderivative difference.
    const GaussLegendre& rule = gauss_legendre(32);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double u = mid + 0.5 * width * rule.nodes[k];
      acc += rule.weights[k] * std::log1p(u * u);
    }
    return 0.5 * acc;
  }
  return (log1p_sq_antiderivative(b) - log1p_sq_antiderivative(a)) / width;
}

}  // namespace

double kl_exact_1d(double q, double l, double k, double h) {
  if (!(l > 0.0) || !(h > 0.0)) throw std::invalid_argument("kl_exact_1d: l and h must be positive");
  const double a = (q - l - k) / h;
  const double b = (q + l - k) / h;
  return std::log(std::numbers::pi * h / (2.0 * l)) + mean_log1p_sq(a, b);
}

double kl_exact_1d(const TruthState& truth, const Hypothesis& hyp, std::size_t i) {
  if (truth.dim() != 1 || truth.family().kind() != FamilyKind::kUniformBall) {
    throw std::invalid_argument("exact KL is available only for 1-D uniform truth");
  }
  return kl_exact_1d(truth.center(i)[0], truth.feature_radius(i), hyp.centers.at(i)[0],
                     hyp.scales.at(i));
}

KLEstimate kl_monte_carlo(const TruthState& truth, const Hypothesis& hyp, std::size_t i,
                          std::uint64_t samples, Rng& rng) {
  if (samples == 0) throw std::invalid_argument("kl_monte_carlo needs at least one sample");
  const Point& k = hyp.centers.at(i);
  const double h = hyp.scales.at(i);
  const double l = truth.feature_radius(i);
  const double log_norm = -static_cast<double>(truth.dim()) * std::log(l);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const Point unit = truth.family().sample_unit(rng);
    const Point x = truth.center(i) + unit * l;
    const double log_p = std::log(truth.family().base_density(norm(unit))) + log_norm;
    const double v = log_p - log_cauchy_density(k, h, x);
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  KLEstimate out;
  out.value = mean;
  out.method = KLMethod::kMonteCarlo;
  out.samples = samples;
  if (samples > 1) {
    const auto ns = static_cast<double>(samples);
    out.std_error = std::sqrt(m2 / (ns - 1.0) / ns);
  }
  return out;
}

KLEstimate kl_quadrature(const TruthState& truth, const Hypothesis& hyp, std::size_t i,
                         std::size_t panels) {
  const std::size_t d = truth.dim();
  const Point& q = truth.center(i);
  const double l = truth.feature_radius(i);
  auto integrand = [&](const Point& x) {
    const double p = truth.density(i, x);
    if (p <= 0.0) return 0.0;
    return p * (std::log(p) - log_cauchy_density(hyp.centers.at(i), hyp.scales.at(i), x));
  };

  KLEstimate out;
  out.method = KLMethod::kQuadrature;
  if (d == 1) {
    out.value = integrate([&](double x) { return integrand(Point{x}); }, q[0] - l, q[0] + l,
                          panels, 24);
    return out;
  }
  if (d == 2) {
    // x = q0 + l sin(theta) removes the square-root endpoint behaviour of the chord.
    const double half_pi = 0.5 * std::numbers::pi;
    out.value = integrate(
        [&](double theta) {
          const double chord = l * std::cos(theta);
          const double x = q[0] + l * std::sin(theta);
          const double inner = integrate(
              [&](double y) { return integrand(Point{x, y}); }, q[1] - chord, q[1] + chord,
              panels, 24);
          return inner * l * std::cos(theta);
        },
        -half_pi, half_pi, panels, 24);
    return out;
  }
  throw std::invalid_argument("kl_quadrature supports d = 1 and d = 2 only");
}

double kl_upper_bound(double s, double l, double h, std::size_t d) {
  if (!(l > 0.0) || !(h > 0.0)) throw std::invalid_argument("kl_upper_bound: l and h must be positive");
  const auto dd = static_cast<double>(d);
  const double sl = s + l;
  return std::log(unit_ball_volume(d) * std::pow(std::numbers::pi, dd)) +
         dd * std::log((h * h + sl * sl) / (l * h));
}

double naive_distance_bound(double aspect_ratio, double beta, std::size_t d) {
  if (!(beta > 0.0 && beta < 1.0 / 3.0)) {
    throw std::invalid_argument("naive_distance_bound: beta must lie in (0, 1/3)");
  }
  if (!(aspect_ratio >= 1.0)) throw std::invalid_argument("naive_distance_bound: aspect ratio must be >= 1");
  return static_cast<double>(d) * (std::log(aspect_ratio) + std::log(3.0 / beta));
}

std::vector<KLEstimate> object_distances(const TruthState& truth, const Hypothesis& hyp,
                                         std::uint64_t samples_per_object, Rng& rng) {
  std::vector<KLEstimate> out(truth.size());
  const bool exact = truth.dim() == 1 && truth.family().kind() == FamilyKind::kUniformBall;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (exact) {
      out[i].value = kl_exact_1d(truth, hyp, i);
      out[i].method = KLMethod::kExact1d;
    } else {
      out[i] = kl_monte_carlo(truth, hyp, i, samples_per_object, rng);
    }
  }
  return out;
}

KLEstimate total_distance(const TruthState& truth, const Hypothesis& hyp,
                          std::uint64_t samples_per_object, Rng& rng) {
  KLEstimate out;
  double var = 0.0;
  for (const KLEstimate& e : object_distances(truth, hyp, samples_per_object, rng)) {
    out.value += e.value;
    var += e.std_error * e.std_error;
    out.method = e.method;
    out.samples += e.samples;
  }
  out.std_error = std::sqrt(var);
  return out;
}

PairwiseRatio pairwise_ratio(const TruthState& truth, const Hypothesis& hyp) {
  if (truth.size() < 2) throw std::invalid_argument("pairwise_ratio needs two objects");
  PairwiseRatio out{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t j = i + 1; j < truth.size(); ++j) {
      const double ratio = distance(hyp.centers[i], hyp.centers[j]) /
                           distance(truth.center(i), truth.center(j));
      out.min = std::min(out.min, ratio);
      out.max = std::max(out.max, ratio);
    }
  }
  return out;
}

PairwiseRatio pairwise_ratio_bracket(double beta, double log_c) {
  const double c2 = std::exp(2.0 * log_c);
  return {std::max(0.0, 1.0 - 2.0 * beta * c2), 1.0 + 2.0 * beta * c2};
}

}  // namespace localmotion
