#include "localmotion/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace localmotion {

namespace {

constexpr std::uint64_t kLayoutStream = 0;
constexpr std::uint64_t kEvolverStream = 1;
constexpr std::uint64_t kOracleStream = 2;
constexpr std::uint64_t kMetricsStream = 3;

constexpr double kTol = 1e-9;

bool separated(const std::vector<Point>& pts, const Point& x, double min_sep) {
  return std::none_of(pts.begin(), pts.end(),
                      [&](const Point& p) { return distance(p, x) < min_sep; });
}

std::vector<Point> scatter(std::size_t count, const Point& center, double radius, double min_sep,
                           std::vector<Point> existing, Rng& rng) {
  const std::size_t d = center.dim();
  const std::size_t want = existing.size() + count;
  std::uint64_t attempts = 0;
  const std::uint64_t budget = 2000 * (count + 1);
  while (existing.size() < want) {
    if (++attempts > budget) {
      throw std::runtime_error(fmt::format(
          "cannot place {} points with separation {} in a ball of radius {}", count, min_sep, radius));
    }
    const Point x = center + rng.in_unit_ball(d) * radius;
    if (separated(existing, x, min_sep)) existing.push_back(x);
  }
  return existing;
}

std::vector<Point> grid_points(std::size_t n, std::size_t d, double spacing) {
  auto side = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 / d)));
  while (std::pow(static_cast<double>(side), static_cast<double>(d)) < static_cast<double>(n)) ++side;
  const double offset = 0.5 * static_cast<double>(side - 1) * spacing;
  std::vector<Point> out;
  std::vector<std::size_t> idx(d, 0);
  while (out.size() < n) {
    Point p(d);
    for (std::size_t k = 0; k < d; ++k) p[k] = static_cast<double>(idx[k]) * spacing - offset;
    out.push_back(p);
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < side) break;
      idx[k] = 0;
    }
  }
  return out;
}

double max_norm(const std::vector<Point>& pts) {
  double r = 0.0;
  for (const Point& p : pts) r = std::max(r, norm(p));
  return r;
}

}  // namespace

std::uint64_t InvariantCounters::total_violations() const {
  return illegal_steps + potential_violations + packing_violations + cache_violations +
         containment_violations + completion_violations + kl_bound_violations + kl_negative +
         ratio_violations + ledger_violations + support_violations + scheduler_violations;
}

InitialLayout make_initial_layout(const ExperimentConfig& cfg, Rng& rng) {
  InitialLayout out;
  const std::size_t d = cfg.d;
  const double region = cfg.init_radius > 0.0 ? cfg.init_radius : cfg.r0;
  switch (cfg.init) {
    case InitLayout::kUniform:
      if (!(region > 0.0)) throw std::runtime_error("uniform layout needs init_radius or r0");
      out.centers = scatter(cfg.n, Point(d), region, cfg.min_separation, {}, rng);
      break;
    case InitLayout::kGrid:
      out.centers = grid_points(cfg.n, d, cfg.min_separation);
      break;
    case InitLayout::kClustered: {
      // Two scales: sqrt(n) clusters spread over the region, points packed
      // inside each cluster at the minimum separation.
      if (!(region > 0.0)) throw std::runtime_error("clustered layout needs init_radius or r0");
      const auto clusters = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(cfg.n))));
      const double cluster_radius =
          region / (4.0 * std::pow(static_cast<double>(clusters), 1.0 / static_cast<double>(d)));
      const std::vector<Point> seeds =
          scatter(clusters, Point(d), region - cluster_radius, 2.5 * cluster_radius, {}, rng);
      std::vector<Point> pts;
      for (std::size_t c = 0; c < clusters; ++c) {
        const std::size_t share = cfg.n / clusters + (c < cfg.n % clusters ? 1 : 0);
        pts = scatter(share, seeds[c], cluster_radius, cfg.min_separation, std::move(pts), rng);
      }
      out.centers = std::move(pts);
      break;
    }
    case InitLayout::kPairs:
      out.centers = pair_layout(cfg.n / 2);
      break;
  }

  if (cfg.aspect_ratio > 0.0) {
    out.bounding_radius = cfg.aspect_ratio * min_pairwise_distance(out.centers);
  } else if (cfg.r0 > 0.0) {
    out.bounding_radius = cfg.r0;
  } else if (cfg.init == InitLayout::kPairs) {
    out.bounding_radius = 100.0 * static_cast<double>(cfg.n / 2) + 10.0;
  } else if (region > 0.0 && cfg.init != InitLayout::kGrid) {
    out.bounding_radius = region;
  } else {
    out.bounding_radius = 2.0 * max_norm(out.centers) + cfg.min_separation;
  }
  if (max_norm(out.centers) > out.bounding_radius) {
    throw std::runtime_error(fmt::format("initial points reach radius {} beyond R0 = {}",
                                         max_norm(out.centers), out.bounding_radius));
  }
  return out;
}

std::unique_ptr<EvolverStrategy> make_strategy(const ExperimentConfig& cfg, const TruthState& truth) {
  switch (cfg.evolver) {
    case EvolverKind::kRandom: return make_random();
    case EvolverKind::kDormant: return make_dormant();
    case EvolverKind::kScripted:
      return std::make_unique<ScriptedStrategy>(load_script_csv(cfg.script, cfg.d));
    case EvolverKind::kAdversary: {
      if (cfg.adversary_start == 0) {
        throw std::invalid_argument("adversary_start must be resolved before building the adversary");
      }
      return std::make_unique<LowerBoundAdversary>(
          truth, AdversaryParams{cfg.adversary_start, cfg.adversary_window_divisor});
    }
  }
  throw std::invalid_argument("unknown evolver kind");
}

namespace {

TruthState build_truth(const ExperimentConfig& cfg) {
  cfg.validate();
  Rng rng = Rng::stream(cfg.seed, kLayoutStream);
  InitialLayout layout = make_initial_layout(cfg, rng);
  return TruthState(std::move(layout.centers), cfg.alpha, cfg.beta, layout.bounding_radius,
                    DistributionFamily::make(cfg.family, cfg.d, cfg.family_scale));
}

}  // namespace

Simulation::Simulation(const ExperimentConfig& cfg) : Simulation(cfg, build_truth(cfg), nullptr) {}

Simulation::Simulation(const ExperimentConfig& cfg, TruthState truth,
                       std::unique_ptr<EvolverStrategy> evolver)
    : cfg_(cfg),
      truth_(std::move(truth)),
      evolver_(evolver ? std::move(evolver) : make_strategy(cfg, truth_)),
      tracker_(truth_.size(), truth_.bounding(), TrackerOptions{cfg.beta, cfg.expansion_numerator}),
      evolver_rng_(Rng::stream(cfg.seed, kEvolverStream)),
      oracle_rng_(Rng::stream(cfg.seed, kOracleStream)),
      metrics_rng_(Rng::stream(cfg.seed, kMetricsStream)),
      ledger_(truth_, tracker_.hypothesis()),
      phi0_(completion_potential_bound(cfg.beta)),
      check_potential_bound_(cfg.alpha < 1.0 / 3.0 && cfg.beta < 1.0 / 3.0),
      disturbed_at_(truth_.size(), 0) {
  if (truth_.size() != cfg.n || truth_.dim() != cfg.d) {
    throw std::invalid_argument("simulation: truth does not match the configuration");
  }
  if (check_potential_bound_) {
    counters_.potential_bound = evolver_potential_bound(cfg.alpha, cfg.beta, cfg.d);
  }
  initial_phi_ = ledger_.total();
  initial_phi_expected_ = initial_potential(truth_);
  initial_aspect_ratio_ = truth_.aspect_ratio();
  record_row();
}

void Simulation::run_to(std::uint64_t t) {
  while (time_ < t) step();
}

void Simulation::step() {
  ++time_;
  oracle_.begin_unit();
  evolver_step();
  for (std::uint64_t k = 0; k < cfg_.sigma; ++k) {
    tracker_.step(truth_, oracle_, oracle_rng_, this);
  }
  if (tracker_.steps() != cfg_.sigma * time_ || oracle_.ledger().total != cfg_.sigma * time_ ||
      oracle_.ledger().this_unit != cfg_.sigma || counters_.evolver_steps > time_) {
    ++counters_.scheduler_violations;
  }
  counters_.support_violations = oracle_.ledger().support_violations;
  if (tracker_.iterations() != last_iterations_) {
    last_iterations_ = tracker_.iterations();
    check_ratio();
  }
  record_row();
}

void Simulation::evolver_step() {
  const AdversaryView view{truth_,           tracker_.hypothesis(), tracker_.modified_at(),
                           tracker_.steps(), tracker_.current_index(), time_};
  const std::optional<EvolverStep> proposal = evolver_->propose(view, evolver_rng_);
  if (!proposal) return;

  MoveReport report;
  try {
    report = apply_step(truth_, *proposal);
  } catch (const ModelViolation&) {
    ++counters_.illegal_steps;
    return;
  }
  ++counters_.evolver_steps;

  const Hypothesis& hyp = tracker_.hypothesis();
  double delta = ledger_.refresh(truth_, hyp, report.moved);
  disturbed_at_[report.moved] = truth_.version();
  for (std::size_t j : report.affected) {
    delta += ledger_.refresh(truth_, hyp, j);
    disturbed_at_[j] = truth_.version();
  }
  if (check_potential_bound_) {
    ++counters_.potential_checks;
    counters_.max_potential_increase = std::max(counters_.max_potential_increase, delta);
    if (delta > counters_.potential_bound + kTol) ++counters_.potential_violations;
  }
  counters_.max_affected = std::max(counters_.max_affected, report.affected.size());
  if (report.affected.size() > affected_count_bound(cfg_.d)) ++counters_.packing_violations;
  if (cfg_.cache_check_every > 0 && counters_.evolver_steps % cfg_.cache_check_every == 0) {
    check_caches();
  }
}

void Simulation::on_hypothesis_change(std::size_t index) {
  ledger_.refresh(truth_, tracker_.hypothesis(), index);
}

void Simulation::on_expansion(const ExpansionEvent& e) {
  ++counters_.expansion_events;
  if (!e.same_state) {
    ++counters_.expansion_straddled;
    return;
  }
  ++counters_.expansion_checked;
  if (!ball_within(truth_.local_feature(e.index), e.claimed, kTol)) {
    ++counters_.containment_violations;
  }
}

void Simulation::on_completion(const CompletionEvent& e) {
  ++counters_.completion_events;
  const double phi = ledger_.value(e.index);
  if (disturbed_at_[e.index] > index_started_at_) {
    ++counters_.completion_disturbed;
    if (phi > phi0_ + kTol) ++counters_.completion_disturbed_over_bound;
  } else {
    ++counters_.completion_checked;
    counters_.max_completion_phi = std::max(counters_.max_completion_phi, phi);
    if (phi > phi0_ + kTol) ++counters_.completion_violations;
  }
  index_started_at_ = truth_.version();
}

void Simulation::check_caches() {
  ++counters_.cache_checks;
  if (!truth_.caches_consistent()) ++counters_.cache_violations;
}

void Simulation::check_ledger() {
  ++counters_.ledger_checks;
  const double scratch = potential(truth_, tracker_.hypothesis()).total;
  const double drift = std::abs(scratch - ledger_.total());
  counters_.max_ledger_drift = std::max(counters_.max_ledger_drift, drift);
  if (drift > kTol) ++counters_.ledger_violations;
}

void Simulation::check_ratio() {
  if (ledger_.max() > phi0_ + kTol) return;
  const PairwiseRatio r = pairwise_ratio(truth_, tracker_.hypothesis());
  const PairwiseRatio bracket = pairwise_ratio_bracket(cfg_.beta, phi0_);
  if (counters_.ratio_snapshots == 0) {
    counters_.ratio_min = r.min;
    counters_.ratio_max = r.max;
  } else {
    counters_.ratio_min = std::min(counters_.ratio_min, r.min);
    counters_.ratio_max = std::max(counters_.ratio_max, r.max);
  }
  ++counters_.ratio_snapshots;
  if (r.min < bracket.min - kTol || r.max > bracket.max + kTol) ++counters_.ratio_violations;
}

void Simulation::distance_snapshot(MetricsRow& row) {
  const Hypothesis& hyp = tracker_.hypothesis();
  const std::vector<KLEstimate> parts = object_distances(truth_, hyp, cfg_.kl_samples, metrics_rng_);
  const std::size_t d = cfg_.d;
  const double floor =
      std::log(unit_ball_volume(d) * std::pow(std::numbers::pi, static_cast<double>(d))) +
      2.0 * static_cast<double>(d) * std::log(3.0);
  double total = 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const KLEstimate& e = parts[i];
    total += e.value;
    var += e.std_error * e.std_error;
    const double s = distance(truth_.center(i), hyp.centers[i]);
    const double bound = kl_upper_bound(s, truth_.feature_radius(i), hyp.scales[i], d);
    const double coarse = floor + 2.0 * static_cast<double>(d) * ledger_.value(i);
    ++counters_.kl_bound_checks;
    if (e.value + 3.0 * e.std_error > bound + kTol || bound > coarse + kTol) {
      ++counters_.kl_bound_violations;
    }
    const bool negative = e.method == KLMethod::kExact1d ? e.value < -1e-12
                                                         : e.value < -3.0 * e.std_error;
    if (negative) ++counters_.kl_negative;
  }
  row.d_estimate_nats = total;
  row.d_stderr_nats = std::sqrt(var);
}

void Simulation::snapshot_hypothesis() {
  const Hypothesis& hyp = tracker_.hypothesis();
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    hypothesis_csv_ += fmt::format("{},{}", time_, i);
    for (double c : hyp.centers[i].coords()) hypothesis_csv_ += fmt::format(",{:.17g}", c);
    hypothesis_csv_ += fmt::format(",{:.17g}\n", hyp.scales[i]);
  }
}

void Simulation::record_row() {
  const bool distance_due = time_ % cfg_.effective_metrics_stride() == 0;
  if (cfg_.hypothesis_every > 0 && time_ % cfg_.hypothesis_every == 0) snapshot_hypothesis();
  if (!distance_due && time_ % cfg_.log_stride != 0) return;
  MetricsRow row;
  row.t = time_;
  row.evolver_steps = counters_.evolver_steps;
  row.tracker_queries = oracle_.ledger().total;
  row.phi_total = ledger_.total();
  row.phi_max_i = ledger_.max();
  row.completions = tracker_.completions();
  if (distance_due) {
    distance_snapshot(row);
    check_ledger();
    check_caches();
    check_ratio();
  }
  rows_.push_back(row);
}

std::optional<std::uint64_t> detect_burn_in(const std::vector<MetricsRow>& rows, std::size_t n,
                                            double threshold_per_object) {
  if (rows.empty()) return std::nullopt;
  const auto nn = static_cast<double>(n);
  const std::uint64_t last = rows.back().t;
  // Walking backwards, `next_bad` is the earliest later time above threshold.
  std::optional<std::uint64_t> best;
  std::optional<std::uint64_t> next_bad;
  for (std::size_t r = rows.size(); r-- > 0;) {
    const MetricsRow& row = rows[r];
    if (row.phi_total / nn > threshold_per_object) {
      next_bad = row.t;
      continue;
    }
    if (row.t + n > last) continue;
    if (!next_bad || *next_bad > row.t + n) best = row.t;
  }
  return best;
}

RunSummary summarize(const Simulation& sim) {
  const ExperimentConfig& cfg = sim.config();
  RunSummary s;
  s.n = cfg.n;
  s.d = cfg.d;
  s.sigma = cfg.sigma;
  s.seed = cfg.seed;
  s.final_time = sim.time();
  s.initial_aspect_ratio = sim.initial_aspect_ratio();
  s.initial_phi = sim.initial_phi();
  s.initial_phi_expected = sim.initial_phi_expected();
  s.burn_in_threshold = cfg.effective_burn_in_threshold();
  s.burn_in_time = detect_burn_in(sim.rows(), cfg.n, s.burn_in_threshold);

  const auto n = static_cast<double>(cfg.n);
  if (s.burn_in_time) {
    double phi_sum = 0.0, phi_max = 0.0, d_sum = 0.0, d_max = 0.0;
    std::size_t phi_count = 0, d_count = 0;
    for (const MetricsRow& row : sim.rows()) {
      if (row.t < *s.burn_in_time) continue;
      phi_sum += row.phi_total / n;
      phi_max = std::max(phi_max, row.phi_total / n);
      ++phi_count;
      if (row.d_estimate_nats) {
        d_sum += *row.d_estimate_nats / n;
        d_max = std::max(d_max, *row.d_estimate_nats / n);
        ++d_count;
      }
    }
    s.steady_mean_phi_per_n = phi_sum / static_cast<double>(phi_count);
    s.steady_max_phi_per_n = phi_max;
    if (d_count > 0) {
      s.steady_mean_d_per_n = d_sum / static_cast<double>(d_count);
      s.steady_max_d_per_n = d_max;
    }
  }
  s.final_phi_per_n = sim.phi_total() / n;
  for (auto it = sim.rows().rbegin(); it != sim.rows().rend(); ++it) {
    if (it->d_estimate_nats) {
      s.final_d_per_n = *it->d_estimate_nats / n;
      break;
    }
  }
  const QueryLedger& q = sim.oracle().ledger();
  s.tracker_queries = q.total;
  s.queries_per_kind = q.per_kind;
  s.samples_drawn = q.samples_drawn;
  s.evolver_steps = sim.counters().evolver_steps;
  s.completions = sim.tracker().completions();
  s.iterations = sim.tracker().iterations();
  s.counters = sim.counters();
  return s;
}

std::uint64_t auto_adversary_start(const ExperimentConfig& cfg) {
  ExperimentConfig dormant = cfg;
  dormant.evolver = EvolverKind::kDormant;
  Simulation sim(dormant);
  while (sim.time() < cfg.max_time && sim.tracker().iterations() == 0) sim.step();
  if (sim.tracker().iterations() == 0) {
    throw std::runtime_error(fmt::format(
        "dormant run did not finish a pass within {} time units; set adversary_start", cfg.max_time));
  }
  const std::uint64_t pass_done = sim.time();
  sim.run_to(std::max(cfg.max_time, pass_done + 2 * cfg.n));
  const auto burn_in = detect_burn_in(sim.rows(), cfg.n, cfg.effective_burn_in_threshold());
  return std::max(pass_done, burn_in.value_or(pass_done)) + cfg.n;
}

RunResult run(const ExperimentConfig& cfg_in) {
  const auto started = std::chrono::steady_clock::now();
  ExperimentConfig cfg = cfg_in;
  cfg.validate();
  if (cfg.evolver == EvolverKind::kAdversary && cfg.adversary_start == 0) {
    cfg.adversary_start = auto_adversary_start(cfg);
  }
  Simulation sim(cfg);
  sim.run_to(cfg.max_time);
  RunResult out;
  out.config = cfg;
  out.rows = sim.rows();
  out.summary = summarize(sim);
  out.hypothesis_csv = sim.hypothesis_csv();
  out.summary.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

Calibration calibrate_sigma(const ExperimentConfig& cfg, std::vector<std::uint64_t> candidates) {
  if (candidates.empty()) throw std::invalid_argument("calibrate_sigma needs candidates");
  std::sort(candidates.begin(), candidates.end());
  Calibration out;
  for (std::uint64_t sigma : candidates) {
    ExperimentConfig trial = cfg;
    trial.sigma = sigma;
    CalibrationTrial t;
    t.sigma = sigma;
    t.summary = run(trial).summary;
    t.accepted = t.summary.burn_in_time && t.summary.steady_mean_phi_per_n &&
                 *t.summary.steady_mean_phi_per_n <= t.summary.burn_in_threshold;
    out.trials.push_back(t);
    if (t.accepted) {
      out.sigma = sigma;
      return out;
    }
  }
  out.sigma = candidates.back();
  return out;
}

}  // namespace localmotion
