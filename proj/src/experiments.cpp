#include "localmotion/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace localmotion {

namespace {

double cauchy_mass_1d(double lo, double hi, double k, double h) {
  return (std::atan((hi - k) / h) - std::atan((lo - k) / h)) / std::numbers::pi;
}

double exact_total(const TruthState& truth, const Hypothesis& hyp) {
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) total += kl_exact_1d(truth, hyp, i);
  return total;
}

}  // namespace

LowerBoundResult lower_bound_experiment(const ExperimentConfig& cfg_in) {
  const auto started = std::chrono::steady_clock::now();
  ExperimentConfig cfg = cfg_in;
  if (cfg.evolver != EvolverKind::kAdversary || cfg.init != InitLayout::kPairs || cfg.d != 1) {
    throw std::invalid_argument("lower-bound experiment needs evolver = adversary, init = pairs, d = 1");
  }
  if (cfg.family != FamilyKind::kUniformBall) {
    throw std::invalid_argument("lower-bound experiment measures exact KL and needs the uniform family");
  }
  cfg.validate();
  if (cfg.adversary_start == 0) cfg.adversary_start = auto_adversary_start(cfg);

  Simulation sim(cfg);
  auto* adversary = dynamic_cast<LowerBoundAdversary*>(&sim.evolver());
  if (adversary == nullptr) throw std::logic_error("lower-bound experiment lost its adversary");

  LowerBoundResult out;
  out.window_start = adversary->window_start();
  out.window_end = adversary->window_end();
  out.kappa = adversary->kappa();
  out.target_count = adversary->target_count();

  const auto n = static_cast<double>(cfg.n);
  sim.run_to(out.window_start - 1);
  const TruthState before = sim.truth();
  const Hypothesis hyp_before = sim.tracker().hypothesis();
  const double d_start = exact_total(before, hyp_before);

  sim.run_to(out.window_end);
  const TruthState& after = sim.truth();
  const Hypothesis& hyp_after = sim.tracker().hypothesis();
  const double d_end = exact_total(after, hyp_after);

  out.d_per_n_start = d_start / n;
  out.d_per_n_end = d_end / n;
  out.excess_per_n = (d_end - d_start) / n;

  for (std::size_t t = 0; t < adversary->targets().size(); ++t) {
    LowerBoundTarget target;
    const std::size_t a = adversary->targets()[t];
    target.index = a;
    target.pushes = adversary->pushes()[t];
    target.altered = !(hyp_before.centers[a] == hyp_after.centers[a]) ||
                     hyp_before.scales[a] != hyp_after.scales[a];
    target.gap_start = distance(before.center(a), before.center(a + 1));
    target.gap_end = distance(after.center(a), after.center(a + 1));
    target.d_start = kl_exact_1d(before, hyp_before, a);
    target.d_end = kl_exact_1d(after, hyp_after, a);

    const double q0 = before.center(a)[0], l0 = before.feature_radius(a);
    const double q1 = after.center(a)[0], l1 = after.feature_radius(a);
    target.disjoint = std::abs(q1 - q0) > l0 + l1;
    const double k = hyp_before.centers[a][0];
    const double h = hyp_before.scales[a];
    target.mass_start = cauchy_mass_1d(q0 - l0, q0 + l0, k, h);
    target.mass_end = cauchy_mass_1d(q1 - l1, q1 + l1, k, h);

    const bool full = target.pushes == out.kappa;
    if (full && target.gap_end < 2.0 * target.gap_start * (1.0 - 1e-12)) ++out.separation_failures;
    if (full && !target.altered) {
      target.checked = true;
      constexpr double kTol = 1e-9;
      target.argument_holds =
          target.disjoint && target.d_start >= -std::log(target.mass_start) - kTol &&
          target.d_end >= -std::log(target.mass_end) - kTol &&
          std::exp(-target.d_start) + std::exp(-target.d_end) <= 1.0 + kTol;
      if (!target.argument_holds) ++out.argument_violations;
    }
    out.targets.push_back(target);
  }

  out.rows = sim.rows();
  out.summary = summarize(sim);
  out.summary.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out.passed = out.d_per_n_end > 0.0 && out.separation_failures == 0 &&
               out.argument_violations == 0 && out.summary.counters.total_violations() == 0;
  return out;
}

namespace {

VerifyCheck make_check(std::string name, std::uint64_t events, std::uint64_t violations,
                       std::string detail) {
  VerifyCheck c;
  c.name = std::move(name);
  c.events = events;
  c.violations = violations;
  c.passed = violations == 0;
  c.detail = std::move(detail);
  return c;
}

// Aggregate Monte Carlo distance against an independent deterministic
// evaluation, within three combined standard errors.
VerifyCheck mc_agreement(const Simulation& sim) {
  const TruthState& truth = sim.truth();
  const Hypothesis& hyp = sim.tracker().hypothesis();
  const bool uniform = truth.family().kind() == FamilyKind::kUniformBall;
  if (!uniform || truth.dim() > 2) {
    VerifyCheck c = make_check("kl_mc_vs_reference", 0, 0, "not applicable (needs uniform family, d <= 2)");
    return c;
  }
  Rng rng = Rng::stream(sim.config().seed, 17);
  constexpr std::uint64_t kSamples = 20000;
  double mc = 0.0, var = 0.0, reference = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const KLEstimate e = kl_monte_carlo(truth, hyp, i, kSamples, rng);
    mc += e.value;
    var += e.std_error * e.std_error;
    reference += truth.dim() == 1 ? kl_exact_1d(truth, hyp, i) : kl_quadrature(truth, hyp, i).value;
  }
  const double se = std::sqrt(var);
  const bool ok = std::abs(mc - reference) <= 3.0 * se + 1e-9;
  return make_check("kl_mc_vs_reference", truth.size(), ok ? 0 : 1,
                    fmt::format("mc {:.6f} +- {:.2e}, reference {:.6f}", mc, se, reference));
}

}  // namespace

VerifyReport verify(const ExperimentConfig& cfg_in) {
  const auto started = std::chrono::steady_clock::now();
  ExperimentConfig cfg = cfg_in;
  cfg.validate();
  if (cfg.evolver == EvolverKind::kAdversary && cfg.adversary_start == 0) {
    cfg.adversary_start = auto_adversary_start(cfg);
  }
  Simulation sim(cfg);
  sim.run_to(cfg.max_time);

  VerifyReport report;
  report.summary = summarize(sim);
  const InvariantCounters& c = sim.counters();
  auto& checks = report.checks;
  checks.push_back(make_check(
      "expansion_containment", c.expansion_checked, c.containment_violations,
      fmt::format("{} events, {} straddled an evolver step", c.expansion_events, c.expansion_straddled)));
  checks.push_back(make_check(
      "completion_bound", c.completion_checked, c.completion_violations,
      fmt::format("max phi {:.6f} vs bound {:.6f}; {} completions on disturbed objects ({} above bound)",
                  c.max_completion_phi, completion_potential_bound(cfg.beta), c.completion_disturbed,
                  c.completion_disturbed_over_bound)));
  checks.push_back(make_check(
      "evolver_potential_bound", c.potential_checks, c.potential_violations,
      c.potential_checks ? fmt::format("max increase {:.6f} vs K = {:.6f}", c.max_potential_increase,
                                       c.potential_bound)
                         : std::string("not applicable")));
  checks.push_back(make_check("packing", c.evolver_steps, c.packing_violations,
                              fmt::format("max affected {} vs {}", c.max_affected,
                                          affected_count_bound(cfg.d))));
  checks.push_back(make_check("legal_steps", c.evolver_steps + c.illegal_steps, c.illegal_steps, ""));
  checks.push_back(make_check("nn_caches", c.cache_checks, c.cache_violations, ""));
  checks.push_back(make_check("kl_upper_bound", c.kl_bound_checks, c.kl_bound_violations + c.kl_negative,
                              fmt::format("{} negative estimates", c.kl_negative)));
  checks.push_back(mc_agreement(sim));
  const double phi0_error = std::abs(sim.initial_phi() - sim.initial_phi_expected());
  checks.push_back(make_check("initial_potential", 1, phi0_error <= 1e-9 ? 0 : 1,
                              fmt::format("logged {:.12f}, expected {:.12f}", sim.initial_phi(),
                                          sim.initial_phi_expected())));
  const std::uint64_t expected_queries = cfg.sigma * sim.time();
  checks.push_back(make_check(
      "speedup_accounting", sim.time(),
      c.scheduler_violations + (report.summary.tracker_queries == expected_queries ? 0 : 1),
      fmt::format("{} queries = sigma * T = {}", report.summary.tracker_queries, expected_queries)));
  checks.push_back(make_check("potential_ledger", c.ledger_checks, c.ledger_violations,
                              fmt::format("max drift {:.3e}", c.max_ledger_drift)));
  checks.push_back(make_check(
      "pairwise_ratio", c.ratio_snapshots, c.ratio_violations,
      c.ratio_snapshots ? fmt::format("ratios in [{:.4f}, {:.4f}]", c.ratio_min, c.ratio_max)
                        : std::string("no snapshot with every phi_i <= phi0")));
  checks.push_back(make_check("oracle_support", report.summary.samples_drawn, c.support_violations, ""));

  report.passed = std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& k) { return k.passed; });
  report.summary.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, const std::string& key,
                              const std::vector<std::string>& values) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<SweepPoint> out;
  for (const std::string& value : values) {
    ExperimentConfig point = cfg;
    set_config_value(point, key, value);
    out.push_back({value, run(point)});
  }
  return out;
}

}  // namespace localmotion
