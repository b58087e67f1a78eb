#include "localmotion/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "localmotion/metrics.hpp"

namespace localmotion {

std::string_view to_string(EvolverKind kind) {
  switch (kind) {
    case EvolverKind::kRandom: return "random";
    case EvolverKind::kDormant: return "dormant";
    case EvolverKind::kScripted: return "scripted";
    case EvolverKind::kAdversary: return "adversary";
  }
  return "?";
}

std::string_view to_string(InitLayout layout) {
  switch (layout) {
    case InitLayout::kUniform: return "uniform";
    case InitLayout::kGrid: return "grid";
    case InitLayout::kClustered: return "clustered";
    case InitLayout::kPairs: return "pairs";
  }
  return "?";
}

double ExperimentConfig::effective_burn_in_threshold() const {
  return burn_in_threshold > 0.0 ? burn_in_threshold : 2.0 * completion_potential_bound(beta);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (n < 2) fail("n must be at least 2");
  if (d < 1 || d > kMaxDim) fail(fmt::format("d must lie in [1, {}]", kMaxDim));
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (!(beta > 0.0 && beta < 1.0)) fail("beta must lie in (0, 1)");
  if (strict_parameters && !(alpha < 1.0 / 3.0 && beta < 1.0 / 3.0)) {
    fail("alpha and beta must be below 1/3 (set strict_parameters = false to override)");
  }
  if (!(beta < 0.5)) fail("beta must be below 1/2 for the tracker");
  if (sigma < 1) fail("sigma must be a positive integer");
  if (r0 < 0.0) fail("r0 must be non-negative");
  if (aspect_ratio < 0.0) fail("aspect_ratio must be non-negative");
  if (aspect_ratio > 0.0 && r0 > 0.0) fail("set at most one of r0 and aspect_ratio");
  if (r0 == 0.0 && aspect_ratio == 0.0 && init != InitLayout::kPairs && init_radius == 0.0) {
    fail("one of r0, aspect_ratio or init_radius is required");
  }
  if (!(min_separation > 0.0)) fail("min_separation must be positive");
  if (family != FamilyKind::kUniformBall && !(family_scale > 0.0)) fail("family_scale must be positive");
  if (evolver == EvolverKind::kScripted && script.empty()) fail("scripted evolver needs 'script'");
  if (evolver == EvolverKind::kAdversary) {
    if (init != InitLayout::kPairs || d != 1) fail("adversary evolver needs init = pairs and d = 1");
    if (n % 2 != 0) fail("adversary evolver needs an even n");
    if (adversary_window_divisor == 0) fail("adversary_window_divisor must be positive");
  }
  if (init == InitLayout::kPairs && (d != 1 || n % 2 != 0)) fail("pairs layout needs d = 1 and even n");
  if (max_time == 0) fail("max_time must be positive");
  if (log_stride == 0) fail("log_stride must be positive");
  if (kl_samples == 0) fail("kl_samples must be positive");
  if (!(expansion_numerator > 0.0)) fail("expansion_numerator must be positive");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument(fmt::format("config: bad value '{}' for '{}'", value, key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument(fmt::format("config: bad boolean '{}' for '{}'", value, key));
}

EvolverKind parse_evolver(std::string_view v) {
  if (v == "random") return EvolverKind::kRandom;
  if (v == "dormant") return EvolverKind::kDormant;
  if (v == "scripted") return EvolverKind::kScripted;
  if (v == "adversary") return EvolverKind::kAdversary;
  throw std::invalid_argument(fmt::format("config: unknown evolver '{}'", v));
}

InitLayout parse_layout(std::string_view v) {
  if (v == "uniform") return InitLayout::kUniform;
  if (v == "grid") return InitLayout::kGrid;
  if (v == "clustered") return InitLayout::kClustered;
  if (v == "pairs") return InitLayout::kPairs;
  throw std::invalid_argument(fmt::format("config: unknown init layout '{}'", v));
}

using Setter = std::function<void(ExperimentConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  auto u64 = [](std::uint64_t ExperimentConfig::*m) -> Setter {
    return [m](ExperimentConfig& c, std::string_view k, std::string_view v) {
      c.*m = parse_number<std::uint64_t>(k, v);
    };
  };
  auto real = [](double ExperimentConfig::*m) -> Setter {
    return [m](ExperimentConfig& c, std::string_view k, std::string_view v) {
      c.*m = parse_number<double>(k, v);
    };
  };
  auto size = [](std::size_t ExperimentConfig::*m) -> Setter {
    return [m](ExperimentConfig& c, std::string_view k, std::string_view v) {
      c.*m = parse_number<std::size_t>(k, v);
    };
  };
  static const std::map<std::string, Setter, std::less<>> table = {
      {"n", size(&ExperimentConfig::n)},
      {"d", size(&ExperimentConfig::d)},
      {"alpha", real(&ExperimentConfig::alpha)},
      {"beta", real(&ExperimentConfig::beta)},
      {"sigma", u64(&ExperimentConfig::sigma)},
      {"r0", real(&ExperimentConfig::r0)},
      {"aspect_ratio", real(&ExperimentConfig::aspect_ratio)},
      {"seed", u64(&ExperimentConfig::seed)},
      {"family", [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.family = parse_family_kind(v);
       }},
      {"family_scale", real(&ExperimentConfig::family_scale)},
      {"evolver", [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.evolver = parse_evolver(v);
       }},
      {"script", [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.script = std::string(v);
       }},
      {"adversary_start", u64(&ExperimentConfig::adversary_start)},
      {"adversary_window_divisor", u64(&ExperimentConfig::adversary_window_divisor)},
      {"init", [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.init = parse_layout(v);
       }},
      {"init_radius", real(&ExperimentConfig::init_radius)},
      {"min_separation", real(&ExperimentConfig::min_separation)},
      {"max_time", u64(&ExperimentConfig::max_time)},
      {"metrics_stride", u64(&ExperimentConfig::metrics_stride)},
      {"log_stride", u64(&ExperimentConfig::log_stride)},
      {"kl_samples", u64(&ExperimentConfig::kl_samples)},
      {"burn_in_threshold", real(&ExperimentConfig::burn_in_threshold)},
      {"hypothesis_every", u64(&ExperimentConfig::hypothesis_every)},
      {"cache_check_every", u64(&ExperimentConfig::cache_check_every)},
      {"expansion_numerator", real(&ExperimentConfig::expansion_numerator)},
      {"strict_parameters", [](ExperimentConfig& c, std::string_view k, std::string_view v) {
         c.strict_parameters = parse_bool(k, v);
       }},
      {"out_dir", [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.out_dir = std::string(v);
       }},
  };
  return table;
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  const auto it = setters().find(key);
  if (it == setters().end()) {
    throw std::invalid_argument(fmt::format("config: unknown key '{}'", key));
  }
  it->second(cfg, key, value);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(fmt::format("config line {}: expected 'key = value'", line_no));
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!seen.insert(key).second) {
      throw std::invalid_argument(fmt::format("config line {}: duplicate key '{}'", line_no, key));
    }
    set_config_value(cfg, key, value);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_text(const ExperimentConfig& c) {
  std::string out;
  auto put = [&out](std::string_view k, const auto& v) { out += fmt::format("{} = {}\n", k, v); };
  put("n", c.n);
  put("d", c.d);
  put("alpha", c.alpha);
  put("beta", c.beta);
  put("sigma", c.sigma);
  put("r0", c.r0);
  put("aspect_ratio", c.aspect_ratio);
  put("seed", c.seed);
  put("family", to_string(c.family));
  put("family_scale", c.family_scale);
  put("evolver", to_string(c.evolver));
  if (!c.script.empty()) put("script", c.script);
  put("adversary_start", c.adversary_start);
  put("adversary_window_divisor", c.adversary_window_divisor);
  put("init", to_string(c.init));
  put("init_radius", c.init_radius);
  put("min_separation", c.min_separation);
  put("max_time", c.max_time);
  put("metrics_stride", c.metrics_stride);
  put("log_stride", c.log_stride);
  put("kl_samples", c.kl_samples);
  put("burn_in_threshold", c.burn_in_threshold);
  put("hypothesis_every", c.hypothesis_every);
  put("cache_check_every", c.cache_check_every);
  put("expansion_numerator", c.expansion_numerator);
  put("strict_parameters", c.strict_parameters ? "true" : "false");
  put("out_dir", c.out_dir);
  return out;
}

}  // namespace localmotion
