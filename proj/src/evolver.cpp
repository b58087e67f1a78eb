#include "localmotion/evolver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace localmotion {

MoveReport apply_step(TruthState& truth, const EvolverStep& step) {
  return truth.move(step.index, step.displacement);
}

double evolver_potential_bound(double alpha, double beta, std::size_t d) {
  if (!(alpha > 0.0 && alpha < 1.0 / 3.0) || !(beta > 0.0 && beta < 1.0 / 3.0)) {
    throw std::invalid_argument("evolver_potential_bound: alpha and beta must lie in (0, 1/3)");
  }
  const double self_term = std::log((1.0 + alpha / beta) / std::sqrt(1.0 - alpha));
  const double neighbor_term = 2.0 * std::log((1.0 - alpha) / (1.0 - 2.0 * alpha));
  return self_term + static_cast<double>(affected_count_bound(d)) * neighbor_term;
}

std::size_t affected_count_bound(std::size_t d) {
  std::size_t p = 1;
  for (std::size_t k = 0; k < d; ++k) p *= 3;
  return 2 * p;
}

std::optional<EvolverStep> RandomStrategy::propose(const AdversaryView& view, Rng& rng) {
  const TruthState& truth = view.truth;
  const std::size_t i = rng.index(truth.size());
  const double length = rng.uniform() * truth.alpha() * truth.nn_distance(i);
  Point delta = rng.unit_direction(truth.dim()) * length;

  const Point& q = truth.center(i);
  const double radius = truth.bounding_radius();
  if (norm(q + delta) > radius) {
    // Largest t in [0, 1] with |q + t delta| <= R.
    const double qd = dot(q, delta);
    const double dd = dot(delta, delta);
    const double qq = dot(q, q);
    const double disc = std::max(0.0, qd * qd - dd * (qq - radius * radius));
    const double t = std::clamp((-qd + std::sqrt(disc)) / dd, 0.0, 1.0);
    delta *= t * (1.0 - 1e-12);
  }
  return EvolverStep{i, delta};
}

ScriptedStrategy::ScriptedStrategy(std::vector<ScriptedStep> script)
    : script_(std::move(script)) {
  const bool sorted = std::is_sorted(
      script_.begin(), script_.end(),
      [](const ScriptedStep& a, const ScriptedStep& b) { return a.time < b.time; });
  if (!sorted) throw std::invalid_argument("scripted steps must be sorted by time");
}

std::optional<EvolverStep> ScriptedStrategy::propose(const AdversaryView& view, Rng&) {
  while (next_ < script_.size() && script_[next_].time < view.time) ++next_;
  if (next_ < script_.size() && script_[next_].time == view.time) {
    return script_[next_++].step;
  }
  return std::nullopt;
}

std::vector<ScriptedStep> load_script_csv(const std::filesystem::path& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open script '{}'", path.string()));
  std::vector<ScriptedStep> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (std::isalpha(static_cast<unsigned char>(line[first]))) continue;  // header
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    ScriptedStep s;
    s.step.displacement = Point(dim);
    if (!(fields >> s.time >> s.step.index)) {
      throw std::runtime_error(fmt::format("{}:{}: expected t,i,...", path.string(), line_no));
    }
    for (std::size_t k = 0; k < dim; ++k) {
      if (!(fields >> s.step.displacement[k])) {
        throw std::runtime_error(
            fmt::format("{}:{}: expected {} displacement values", path.string(), line_no, dim));
      }
    }
    out.push_back(s);
  }
  return out;
}

int adversary_push_count(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  int kappa = static_cast<int>(std::ceil(std::log(2.0) / std::log1p(alpha)));
  // Guard the ceiling against rounding on either side.
  while (kappa > 1 && std::pow(1.0 + alpha, kappa - 1) >= 2.0) --kappa;
  while (std::pow(1.0 + alpha, kappa) < 2.0) ++kappa;
  return kappa;
}

std::vector<Point> pair_layout(std::size_t pairs) {
  std::vector<Point> out;
  out.reserve(2 * pairs);
  for (std::size_t i = 1; i <= pairs; ++i) {
    out.push_back(Point{100.0 * static_cast<double>(i)});
    out.push_back(Point{100.0 * static_cast<double>(i) + 1.0});
  }
  return out;
}

LowerBoundAdversary::LowerBoundAdversary(const TruthState& truth, AdversaryParams params)
    : params_(params), kappa_(adversary_push_count(truth.alpha())) {
  if (truth.dim() != 1) throw std::invalid_argument("adversary: the pair layout is one-dimensional");
  if (truth.size() % 2 != 0) throw std::invalid_argument("adversary: n must be even");
  if (!(truth.beta() < 1.0 / 3.0)) throw std::invalid_argument("adversary: beta must be < 1/3");
  if (params_.window_divisor == 0) throw std::invalid_argument("adversary: window divisor must be positive");
  const std::vector<Point> layout = pair_layout(truth.size() / 2);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (std::abs(truth.center(i)[0] - layout[i][0]) > 1e-9) {
      throw std::invalid_argument(fmt::format(
          "adversary: object {} at {} does not match the pair layout ({})", i,
          truth.center(i)[0], layout[i][0]));
    }
  }
  const std::size_t n = truth.size();
  window_length_ = (n + params_.window_divisor - 1) / params_.window_divisor;
  target_count_ = std::max<std::size_t>(
      1, n / (static_cast<std::size_t>(kappa_) * params_.window_divisor));
}

void LowerBoundAdversary::choose_targets(const AdversaryView& view) {
  const std::size_t n = view.truth.size();
  std::vector<std::size_t> a_objects;
  for (std::size_t i = 0; i < n; i += 2) a_objects.push_back(i);
  // Farthest ahead in the tracker's cyclic order first.
  auto lag = [&](std::size_t i) { return (i + n - view.tracker_index) % n; };
  std::stable_sort(a_objects.begin(), a_objects.end(),
                   [&](std::size_t x, std::size_t y) { return lag(x) > lag(y); });
  queue_ = std::move(a_objects);
  queue_pos_ = 0;
}

std::optional<EvolverStep> LowerBoundAdversary::propose(const AdversaryView& view, Rng&) {
  if (view.time < window_start() || view.time >= window_end()) return std::nullopt;
  if (!opened_) {
    opened_ = true;
    opened_at_step_ = view.tracker_steps;
    choose_targets(view);
  }
  auto altered = [&](std::size_t i) { return view.modified_at[i] > opened_at_step_; };

  // Continue the current target, or take the next untouched one.
  const bool continuing =
      !targets_.empty() && pushes_.back() < kappa_ && !altered(targets_.back());
  if (!continuing) {
    const auto finished = static_cast<std::size_t>(
        std::count(pushes_.begin(), pushes_.end(), kappa_));
    if (finished >= target_count_) return std::nullopt;
    while (queue_pos_ < queue_.size() && altered(queue_[queue_pos_])) ++queue_pos_;
    if (queue_pos_ == queue_.size()) return std::nullopt;
    targets_.push_back(queue_[queue_pos_++]);
    pushes_.push_back(0);
  }

  const std::size_t a = targets_.back();
  const double away = view.truth.center(a)[0] < view.truth.center(a + 1)[0] ? -1.0 : 1.0;
  ++pushes_.back();
  return EvolverStep{a, Point{away * view.truth.alpha() * view.truth.nn_distance(a)}};
}

std::unique_ptr<EvolverStrategy> make_dormant() { return std::make_unique<DormantStrategy>(); }
std::unique_ptr<EvolverStrategy> make_random() { return std::make_unique<RandomStrategy>(); }

}  // namespace localmotion
