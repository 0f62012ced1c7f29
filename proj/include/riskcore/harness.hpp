// Copyright 2026 The riskcore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISKCORE_HARNESS_HPP_
#define RISKCORE_HARNESS_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riskcore/asymptotics.hpp"
#include "riskcore/core.hpp"
#include "riskcore/error.hpp"
#include "riskcore/estimators.hpp"
#include "riskcore/io.hpp"
#include "riskcore/numeric.hpp"
#include "riskcore/parallel.hpp"
#include "riskcore/population.hpp"
#include "riskcore/random.hpp"
#include "riskcore/spectra.hpp"

namespace riskcore {

/// Finite family of Lipschitz spectra with shared constants (C, L).
class LipschitzClass {
 public:
  explicit LipschitzClass(std::vector<Spectrum> members) : members_(std::move(members)) {
    require(!members_.empty(), ErrorCode::kEmptySet, "Lipschitz class has no members");
    for (const auto& phi : members_) {
      require(phi.is_lipschitz(), ErrorCode::kInvalidSpectrum,
              "every class member needs a declared Lipschitz constant");
      class_c_ = std::max(class_c_, phi.bound());
      class_l_ = std::max(class_l_, *phi.lipschitz());
    }
    // Bound and monotonicity are certified by Spectrum itself; the Lipschitz
    // constant is checked here on the same grid.
    for (std::size_t m = 0; m < members_.size(); ++m) {
      const Spectrum& phi = members_[m];
      double prev = phi.density_unchecked(1.0 / static_cast<double>(kSpectrumCheckGrid));
      for (std::size_t j = 2; j <= kSpectrumCheckGrid; ++j) {
        const double v = phi.density_unchecked(static_cast<double>(j) /
                                               static_cast<double>(kSpectrumCheckGrid));
        if (!(std::abs(v - prev) <= class_l_ / static_cast<double>(kSpectrumCheckGrid) + 1e-9)) {
          fail(ErrorCode::kInvalidSpectrum,
               "member " + std::to_string(m) + " violates the class Lipschitz constant");
        }
        prev = v;
      }
    }
  }

  /// uniform, linear (slope 2) and exponential with k in {1, 2, 5}.
  static LipschitzClass bundled() {
    return LipschitzClass({Spectrum::uniform(), Spectrum::linear(2.0), Spectrum::exponential(1.0),
                           Spectrum::exponential(2.0), Spectrum::exponential(5.0)});
  }

  std::span<const Spectrum> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  double class_c() const noexcept { return class_c_; }
  double class_l() const noexcept { return class_l_; }

 private:
  std::vector<Spectrum> members_;
  double class_c_ = 0.0;
  double class_l_ = 0.0;
};

/// Serialisable outcome of a harness run. `body` holds the full config echo and
/// results; wall time is kept out of it so reruns serialise identically.
struct ExperimentReport {
  Json body;
  bool pass = false;
  double wall_seconds = 0.0;

  std::string to_json_string() const { return dump_json(body); }
};

// ---------------------------------------------------------------------------
// Experiment configurations

struct CltConfig {
  Spectrum spectrum = Spectrum::uniform();
  ReferenceDistribution dist = ReferenceDistribution::normal(0.0, 1.0);
  std::size_t n = 2000;
  std::size_t reps = 2000;
  double threshold = 0.05;
  std::size_t m = 100;
};

struct BootstrapConfig {
  Spectrum spectrum = Spectrum::linear(2.0);
  ReferenceDistribution dist = ReferenceDistribution::normal(0.0, 1.0);
  std::size_t n = 2000;
  std::size_t replicates = 2000;
  double threshold = 0.08;
  std::size_t m = 100;
};

struct ConsistencyConfig {
  std::vector<Spectrum> members = bundled_members();

  static std::vector<Spectrum> bundled_members() {
    const LipschitzClass cls = LipschitzClass::bundled();
    return {cls.members().begin(), cls.members().end()};
  }
  ReferenceDistribution dist = ReferenceDistribution::uniform(0.0, 1.0);
  std::vector<std::size_t> n_grid = {100000};
  std::size_t reps = 20;
  double tolerance = 0.01;
  double min_pass_fraction = 0.95;
};

struct RateConfig {
  std::vector<Spectrum> members = {Spectrum::uniform()};
  ReferenceDistribution dist = ReferenceDistribution::normal(0.0, 1.0);
  std::vector<std::size_t> n_grid = {100, 316, 1000, 3162, 10000, 31623, 100000};
  std::size_t reps = 50;
  double slope_low = -0.65;
  double slope_high = -0.35;
};

namespace detail {

inline Json members_json(std::span<const Spectrum> members) {
  Json arr = Json::array();
  for (const auto& s : members) arr.push_back(spectrum_to_json(s));
  return arr;
}

inline std::vector<Spectrum> members_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), ErrorCode::kParseError, "'class' must be a non-empty array");
  std::vector<Spectrum> out;
  for (const auto& s : j) out.push_back(spectrum_from_json(s));
  return out;
}

inline std::size_t count_field(const Json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!(j[key].is_number_unsigned() || (j[key].is_number_integer() && j[key].get<long long>() >= 0))) {
    fail(ErrorCode::kParseError,
         std::string("'") + key + "' must be a non-negative integer");
  }
  return j[key].get<std::size_t>();
}

inline double real_field(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!(j[key].is_number())) {
    fail(ErrorCode::kParseError,
         std::string("'") + key + "' must be a number");
  }
  return j[key].get<double>();
}

inline std::vector<std::size_t> grid_field(const Json& j, const char* key,
                                           std::vector<std::size_t> fallback) {
  if (!j.contains(key)) return fallback;
  if (!(j[key].is_array() && !j[key].empty())) {
    fail(ErrorCode::kParseError,
         std::string("'") + key + "' must be a non-empty array");
  }
  std::vector<std::size_t> out;
  for (const auto& v : j[key]) {
    if (!(v.is_number_integer() && v.get<long long>() > 0)) {
      fail(ErrorCode::kParseError,
           std::string("'") + key + "' entries must be positive integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

inline void reject_unknown(const Json& j, std::initializer_list<const char*> known) {
  require(j.is_object(), ErrorCode::kParseError, "experiment config must be a JSON object");
  check_schema(j, "config");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = it.key() == "schema" || it.key() == "experiment";
    for (const char* k : known) ok = ok || it.key() == k;
    if (!(ok)) {
      fail(ErrorCode::kParseError,
           "unknown config field '" + it.key() + "'");
    }
  }
}

}  // namespace detail

inline Json to_json(const CltConfig& c) {
  return {{"schema", kSchema},
          {"experiment", "clt"},
          {"spectrum", spectrum_to_json(c.spectrum)},
          {"dist", distribution_to_json(c.dist)},
          {"n", c.n},
          {"reps", c.reps},
          {"threshold", c.threshold},
          {"m", c.m}};
}

inline CltConfig clt_config_from_json(const Json& j) {
  detail::reject_unknown(j, {"spectrum", "dist", "n", "reps", "threshold", "m"});
  CltConfig c;
  if (j.contains("spectrum")) c.spectrum = spectrum_from_json(j["spectrum"]);
  if (j.contains("dist")) c.dist = distribution_from_json(j["dist"]);
  c.n = detail::count_field(j, "n", c.n);
  c.reps = detail::count_field(j, "reps", c.reps);
  c.threshold = detail::real_field(j, "threshold", c.threshold);
  c.m = detail::count_field(j, "m", c.m);
  return c;
}

inline Json to_json(const BootstrapConfig& c) {
  return {{"schema", kSchema},
          {"experiment", "bootstrap"},
          {"spectrum", spectrum_to_json(c.spectrum)},
          {"dist", distribution_to_json(c.dist)},
          {"n", c.n},
          {"B", c.replicates},
          {"threshold", c.threshold},
          {"m", c.m}};
}

inline BootstrapConfig bootstrap_config_from_json(const Json& j) {
  detail::reject_unknown(j, {"spectrum", "dist", "n", "B", "threshold", "m"});
  BootstrapConfig c;
  if (j.contains("spectrum")) c.spectrum = spectrum_from_json(j["spectrum"]);
  if (j.contains("dist")) c.dist = distribution_from_json(j["dist"]);
  c.n = detail::count_field(j, "n", c.n);
  c.replicates = detail::count_field(j, "B", c.replicates);
  c.threshold = detail::real_field(j, "threshold", c.threshold);
  c.m = detail::count_field(j, "m", c.m);
  return c;
}

inline Json to_json(const ConsistencyConfig& c) {
  return {{"schema", kSchema},
          {"experiment", "consistency"},
          {"class", detail::members_json(c.members)},
          {"dist", distribution_to_json(c.dist)},
          {"n_grid", c.n_grid},
          {"reps", c.reps},
          {"tolerance", c.tolerance},
          {"min_pass_fraction", c.min_pass_fraction}};
}

inline ConsistencyConfig consistency_config_from_json(const Json& j) {
  detail::reject_unknown(j, {"class", "dist", "n_grid", "reps", "tolerance", "min_pass_fraction"});
  ConsistencyConfig c;
  if (j.contains("class")) c.members = detail::members_from_json(j["class"]);
  if (j.contains("dist")) c.dist = distribution_from_json(j["dist"]);
  c.n_grid = detail::grid_field(j, "n_grid", c.n_grid);
  c.reps = detail::count_field(j, "reps", c.reps);
  c.tolerance = detail::real_field(j, "tolerance", c.tolerance);
  c.min_pass_fraction = detail::real_field(j, "min_pass_fraction", c.min_pass_fraction);
  return c;
}

inline Json to_json(const RateConfig& c) {
  return {{"schema", kSchema},
          {"experiment", "rate"},
          {"class", detail::members_json(c.members)},
          {"dist", distribution_to_json(c.dist)},
          {"n_grid", c.n_grid},
          {"reps", c.reps},
          {"slope_band", {c.slope_low, c.slope_high}}};
}

inline RateConfig rate_config_from_json(const Json& j) {
  detail::reject_unknown(j, {"class", "dist", "n_grid", "reps", "slope_band"});
  RateConfig c;
  if (j.contains("class")) c.members = detail::members_from_json(j["class"]);
  if (j.contains("dist")) c.dist = distribution_from_json(j["dist"]);
  c.n_grid = detail::grid_field(j, "n_grid", c.n_grid);
  c.reps = detail::count_field(j, "reps", c.reps);
  if (j.contains("slope_band")) {
    const auto band = detail::number_array(j["slope_band"], "slope_band");
    require(band.size() == 2 && band[0] <= band[1], ErrorCode::kParseError,
            "'slope_band' must be [low, high]");
    c.slope_low = band[0];
    c.slope_high = band[1];
  }
  return c;
}

// ---------------------------------------------------------------------------
// Experiments

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 == 1 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

inline constexpr std::uint64_t kSampleStream = 0xFFFFFFFFull;

// Per-n table of max-over-class errors, rep r at grid index j drawing stream (j, r).
inline std::vector<std::vector<double>> class_errors(std::span<const Spectrum> members,
                                                     const ReferenceDistribution& dist,
                                                     std::span<const std::size_t> n_grid,
                                                     std::size_t reps, std::uint64_t seed,
                                                     unsigned threads) {
  std::vector<double> population(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    population[k] = population_spectral_risk(dist, members[k]);
  }
  std::vector<std::vector<double>> table(n_grid.size(), std::vector<double>(reps));
  for (std::size_t j = 0; j < n_grid.size(); ++j) {
    std::vector<WeightVector> weights;
    for (const auto& phi : members) weights.push_back(canonical_weights(phi, n_grid[j]));
    parallel_for(reps, threads, [&](std::size_t r) {
      const SortedSample s = sort_sample(draw_sample(dist, n_grid[j], {seed, stream_of(j, r)}));
      double worst = 0.0;
      for (std::size_t k = 0; k < members.size(); ++k) {
        worst = std::max(worst, std::abs(l_estimate(weights[k], s) - population[k]));
      }
      table[j][r] = worst;
    });
  }
  return table;
}

}  // namespace detail

/// Uniform consistency: for each n and rep, the max over class members of
/// |rho_hat_{n,phi} - rho_phi(X)|. Passes when, at the largest n, at least
/// min_pass_fraction of the reps fall below `tolerance`.
inline ExperimentReport consistency_sweep(const ConsistencyConfig& cfg, std::uint64_t seed,
                                          unsigned threads = 1) {
  const auto start = detail::Clock::now();
  const LipschitzClass cls(cfg.members);
  require(!cfg.n_grid.empty() && cfg.reps >= 1, ErrorCode::kInvalidArgument,
          "consistency sweep needs a non-empty n grid and reps >= 1");
  for (std::size_t j = 1; j < cfg.n_grid.size(); ++j) {
    require(cfg.n_grid[j] >= cfg.n_grid[j - 1], ErrorCode::kInvalidArgument,
            "n grid must be non-decreasing");
  }
  const auto table =
      detail::class_errors(cls.members(), cfg.dist, cfg.n_grid, cfg.reps, seed, threads);

  ExperimentReport report;
  Json rows = Json::array();
  for (std::size_t j = 0; j < cfg.n_grid.size(); ++j) {
    rows.push_back({{"n", cfg.n_grid[j]},
                    {"median_error", detail::median(table[j])},
                    {"max_error", *std::max_element(table[j].begin(), table[j].end())},
                    {"errors", table[j]}});
  }
  const auto& last = table.back();
  const auto within = static_cast<std::size_t>(
      std::count_if(last.begin(), last.end(), [&](double e) { return e < cfg.tolerance; }));
  report.pass = static_cast<double>(within) >=
                cfg.min_pass_fraction * static_cast<double>(cfg.reps) - 1e-9;
  report.body = {{"schema", kSchema},
                 {"experiment", "consistency"},
                 {"config", to_json(cfg)},
                 {"seed", seed},
                 {"class_C", cls.class_c()},
                 {"class_L", cls.class_l()},
                 {"table", rows},
                 {"reps_within_tolerance", within},
                 {"pass", report.pass}};
  report.wall_seconds = detail::seconds_since(start);
  return report;
}

/// Log-log least-squares slope of the median sup-error against n.
inline ExperimentReport rate_experiment(const RateConfig& cfg, std::uint64_t seed,
                                        unsigned threads = 1) {
  const auto start = detail::Clock::now();
  const LipschitzClass cls(cfg.members);
  require(cfg.n_grid.size() >= 2, ErrorCode::kInvalidArgument, "rate fit needs two or more n");
  for (std::size_t j = 1; j < cfg.n_grid.size(); ++j) {
    require(cfg.n_grid[j] > cfg.n_grid[j - 1], ErrorCode::kInvalidArgument,
            "n grid must be increasing");
  }
  require(static_cast<double>(cfg.n_grid.back()) >= 100.0 * static_cast<double>(cfg.n_grid.front()),
          ErrorCode::kInvalidArgument, "n grid must span at least two decades");
  require(cfg.reps >= 30, ErrorCode::kInvalidArgument, "rate experiment needs reps >= 30");

  const auto table =
      detail::class_errors(cls.members(), cfg.dist, cfg.n_grid, cfg.reps, seed, threads);
  std::vector<double> log_n, log_err;
  Json rows = Json::array();
  for (std::size_t j = 0; j < cfg.n_grid.size(); ++j) {
    const double med = detail::median(table[j]);
    rows.push_back({{"n", cfg.n_grid[j]}, {"median_error", med}});
    if (!(med > 1e-300)) {
      fail(ErrorCode::kDegenerateFit,
           "median error vanished at n=" + std::to_string(cfg.n_grid[j]));
    }
    log_n.push_back(std::log(static_cast<double>(cfg.n_grid[j])));
    log_err.push_back(std::log(med));
  }
  const double slope = least_squares_slope(log_n, log_err);

  ExperimentReport report;
  report.pass = slope >= cfg.slope_low && slope <= cfg.slope_high;
  report.body = {{"schema", kSchema},
                 {"experiment", "rate"},
                 {"config", to_json(cfg)},
                 {"seed", seed},
                 {"table", rows},
                 {"slope", slope},
                 {"pass", report.pass}};
  report.wall_seconds = detail::seconds_since(start);
  return report;
}

/// reps draws of sqrt(n) (rho_hat_{n,phi} - rho_phi(X)) compared with N(0, sigma^2_phi).
inline ExperimentReport clt_check(const CltConfig& cfg, std::uint64_t seed, unsigned threads = 1) {
  const auto start = detail::Clock::now();
  require(cfg.spectrum.is_lipschitz(), ErrorCode::kNotApplicable,
          "the CLT check needs a Lipschitz spectrum (expected shortfall is not)");
  require(cfg.reps >= 500, ErrorCode::kInvalidArgument, "the CLT check needs reps >= 500");
  require(cfg.n >= 1, ErrorCode::kInvalidArgument, "n must be positive");
  const double sigma2 = asymptotic_variance(cfg.spectrum, cfg.dist);
  const double rho = population_spectral_risk(cfg.dist, cfg.spectrum);
  const WeightVector a = canonical_weights(cfg.spectrum, cfg.n);
  const double root_n = std::sqrt(static_cast<double>(cfg.n));

  std::vector<double> values(cfg.reps);
  parallel_for(cfg.reps, threads, [&](std::size_t r) {
    const Sample x = draw_sample(cfg.dist, cfg.n, {seed, r});
    values[r] = root_n * (l_estimate(a, x, true) - rho);
  });
  const double sd = std::sqrt(sigma2);
  auto limit_cdf = [sd](double t) { return standard_normal_cdf(t / sd); };
  const double d_k = kolmogorov_distance(values, limit_cdf);
  const double d_km = truncated_kolmogorov(values, limit_cdf, cfg.m);

  ExperimentReport report;
  report.pass = d_k < cfg.threshold;
  report.body = {{"schema", kSchema},
                 {"experiment", "clt"},
                 {"config", to_json(cfg)},
                 {"seed", seed},
                 {"n", cfg.n},
                 {"reps", cfg.reps},
                 {"population_risk", rho},
                 {"sigma2", sigma2},
                 {"replicate_mean", compensated_sum(values) / static_cast<double>(cfg.reps)},
                 {"d_K", d_k},
                 {"d_K_m", d_km},
                 {"pass", report.pass}};
  report.wall_seconds = detail::seconds_since(start);
  return report;
}

/// One sample of size n, B bootstrap replicates, compared with N(0, sigma^2_phi).
/// The sample comes from stream 0xFFFFFFFF; replicate b uses stream b.
inline ExperimentReport bootstrap_check(const BootstrapConfig& cfg, std::uint64_t seed,
                                        unsigned threads = 1) {
  const auto start = detail::Clock::now();
  require(cfg.spectrum.is_lipschitz(), ErrorCode::kNotApplicable,
          "the bootstrap check needs a Lipschitz spectrum (expected shortfall is not)");
  require(cfg.dist.continuous(), ErrorCode::kNotApplicable,
          "the bootstrap check needs a continuous law with positive density");
  require(cfg.n >= 1 && cfg.replicates >= 1, ErrorCode::kInvalidArgument,
          "n and B must be positive");
  const double sigma2 = asymptotic_variance(cfg.spectrum, cfg.dist);
  const Sample x = draw_sample(cfg.dist, cfg.n, {seed, detail::kSampleStream});
  const std::vector<double> values =
      bootstrap_distribution(x, cfg.spectrum, cfg.replicates, {seed, 0}, threads);
  const bool degenerate = std::all_of(values.begin(), values.end(),
                                      [&](double v) { return v == values.front(); });
  const double sd = std::sqrt(sigma2);
  auto limit_cdf = [sd](double t) { return standard_normal_cdf(t / sd); };
  const double d_k = kolmogorov_distance(values, limit_cdf);
  const double d_km = truncated_kolmogorov(values, limit_cdf, cfg.m);

  ExperimentReport report;
  report.pass = !degenerate && d_k < cfg.threshold && d_km <= d_k;
  report.body = {{"schema", kSchema},
                 {"experiment", "bootstrap"},
                 {"config", to_json(cfg)},
                 {"seed", seed},
                 {"n", cfg.n},
                 {"B", cfg.replicates},
                 {"sigma2", sigma2},
                 {"estimate", spectral_estimate(cfg.spectrum, x)},
                 {"degenerate", degenerate},
                 {"d_K", d_k},
                 {"d_K_m", d_km},
                 {"pass", report.pass}};
  report.wall_seconds = detail::seconds_since(start);
  return report;
}

/// Dispatches on the config's "experiment" field.
inline ExperimentReport run_experiment(const std::string& experiment, const Json& config,
                                       std::uint64_t seed, unsigned threads = 1) {
  if (config.contains("experiment")) {
    require(config["experiment"].is_string() && config["experiment"].get<std::string>() == experiment,
            ErrorCode::kParseError, "config is for a different experiment");
  }
  if (experiment == "clt") return clt_check(clt_config_from_json(config), seed, threads);
  if (experiment == "bootstrap") return bootstrap_check(bootstrap_config_from_json(config), seed, threads);
  if (experiment == "consistency") {
    return consistency_sweep(consistency_config_from_json(config), seed, threads);
  }
  if (experiment == "rate") return rate_experiment(rate_config_from_json(config), seed, threads);
  fail(ErrorCode::kInvalidArgument, "unknown experiment '" + experiment + "'");
}

// ---------------------------------------------------------------------------
// Coherence axioms

enum class Axiom {
  kMonotonicity,
  kCashAdditivity,
  kPositiveHomogeneity,
  kSubadditivity,
  kLawInvariance,
  kComonotonicAdditivity,
};

constexpr std::string_view to_string(Axiom a) {
  switch (a) {
    case Axiom::kMonotonicity: return "monotonicity";
    case Axiom::kCashAdditivity: return "cash_additivity";
    case Axiom::kPositiveHomogeneity: return "positive_homogeneity";
    case Axiom::kSubadditivity: return "subadditivity";
    case Axiom::kLawInvariance: return "law_invariance";
    case Axiom::kComonotonicAdditivity: return "comonotonic_additivity";
  }
  return "unknown";
}

/// A concrete violation: the inputs, and the two sides of the failed relation.
struct Counterexample {
  Axiom axiom;
  std::vector<double> x;
  std::vector<double> y;  // second vector where the axiom has one (y >= x for monotonicity)
  double parameter = 0.0;  // m for cash additivity, lambda for homogeneity
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AxiomResult {
  Axiom axiom;
  std::size_t trials = 0;
  std::optional<Counterexample> counterexample;
};

struct AxiomOptions {
  bool law_invariance = true;
  bool comonotonic_additivity = true;
};

struct AxiomReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  RngSpec rng;
  std::vector<AxiomResult> results;

  bool pass() const {
    return std::all_of(results.begin(), results.end(),
                       [](const AxiomResult& r) { return !r.counterexample; });
  }
  const AxiomResult* find(Axiom a) const {
    for (const auto& r : results) {
      if (r.axiom == a) return &r;
    }
    return nullptr;
  }
};

namespace detail {

// One axiom instance: inputs plus the evaluation of both sides.
struct AxiomCase {
  std::vector<double> x, y;
  double parameter = 0.0;
};

struct Sides {
  double lhs, rhs;
  bool violated;
};

class AxiomProbe {
 public:
  AxiomProbe(const Estimator& oracle, Axiom axiom) : oracle_(oracle), axiom_(axiom) {}

  Sides evaluate(const AxiomCase& c) const {
    const std::size_t n = c.x.size();
    std::vector<double> z(n);
    double lhs = 0.0, rhs = 0.0;
    switch (axiom_) {
      case Axiom::kMonotonicity:  // x <= y  =>  rho(x) >= rho(y); y = x + d, d >= 0
        for (std::size_t i = 0; i < n; ++i) z[i] = c.x[i] + c.y[i];
        lhs = call(c.x);
        rhs = call(z);
        return finish(lhs, rhs, c, lhs < rhs, z);
      case Axiom::kCashAdditivity:
        for (std::size_t i = 0; i < n; ++i) z[i] = c.x[i] + c.parameter;
        lhs = call(z);
        rhs = call(c.x) - c.parameter;
        return finish(lhs, rhs, c, lhs != rhs, z);
      case Axiom::kPositiveHomogeneity:
        for (std::size_t i = 0; i < n; ++i) z[i] = c.parameter * c.x[i];
        lhs = call(z);
        rhs = c.parameter * call(c.x);
        return finish(lhs, rhs, c, lhs != rhs, z);
      case Axiom::kSubadditivity:
        for (std::size_t i = 0; i < n; ++i) z[i] = c.x[i] + c.y[i];
        lhs = call(z);
        rhs = call(c.x) + call(c.y);
        return finish(lhs, rhs, c, lhs > rhs, z);
      case Axiom::kLawInvariance:
        lhs = call(c.y);
        rhs = call(c.x);
        return finish(lhs, rhs, c, lhs != rhs, z);
      case Axiom::kComonotonicAdditivity:
        for (std::size_t i = 0; i < n; ++i) z[i] = c.x[i] + c.y[i];
        lhs = call(z);
        rhs = call(c.x) + call(c.y);
        return finish(lhs, rhs, c, lhs != rhs, z);
    }
    return {0.0, 0.0, false};
  }

 private:
  double call(const std::vector<double>& v) const {
    const double r = oracle_(v);
    require(std::isfinite(r), ErrorCode::kOracleFailure, "oracle returned a non-finite value");
    return r;
  }

  // `raw` says the relation fails in exact arithmetic; a violation must also exceed
  // the tolerance 1e-9 (1 + scale).
  static Sides finish(double lhs, double rhs, const AxiomCase& c, bool raw,
                      const std::vector<double>& z) {
    double scale = std::max({std::abs(lhs), std::abs(rhs), std::abs(c.parameter)});
    for (double v : c.x) scale = std::max(scale, std::abs(v));
    for (double v : c.y) scale = std::max(scale, std::abs(v));
    for (double v : z) scale = std::max(scale, std::abs(v));
    const double tol = 1e-9 * (1.0 + scale);
    return {lhs, rhs, raw && std::abs(lhs - rhs) > tol};
  }

  const Estimator& oracle_;
  Axiom axiom_;
};

inline std::vector<double> random_vector(CounterRng& gen, std::size_t n, double scale) {
  std::vector<double> v(n);
  const bool ties = gen.uniform01() < 0.2;
  for (double& e : v) {
    e = scale * standard_normal_quantile(gen.uniform01());
    if (ties) e = std::round(e);
  }
  return v;
}

// Random non-decreasing piecewise-linear map on [0, 1] with four pieces.
inline std::vector<double> monotone_transform(CounterRng& gen, std::span<const double> u,
                                              double scale) {
  std::array<double, 5> knots_t{0.0, 0.25, 0.5, 0.75, 1.0};
  std::array<double, 5> knots_v{};
  knots_v[0] = scale * standard_normal_quantile(gen.uniform01());
  for (std::size_t k = 1; k < knots_v.size(); ++k) {
    const double step = gen.uniform01() < 0.25 ? 0.0 : scale * gen.uniform01();
    knots_v[k] = knots_v[k - 1] + step;
  }
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::size_t k = std::min<std::size_t>(3, static_cast<std::size_t>(u[i] * 4.0));
    const double w = (u[i] - knots_t[k]) / 0.25;
    out[i] = knots_v[k] + w * (knots_v[k + 1] - knots_v[k]);
  }
  return out;
}

inline AxiomCase generate_case(Axiom axiom, CounterRng& gen, std::size_t n, std::size_t trial) {
  const double scale = std::exp(6.0 * gen.uniform01() - 3.0);
  AxiomCase c;
  switch (axiom) {
    case Axiom::kMonotonicity: {
      c.x = random_vector(gen, n, scale);
      c.y.resize(n);
      for (double& d : c.y) d = gen.uniform01() < 0.3 ? 0.0 : scale * gen.uniform01();
      break;
    }
    case Axiom::kCashAdditivity:
      c.x = random_vector(gen, n, scale);
      c.parameter = scale * standard_normal_quantile(gen.uniform01());
      break;
    case Axiom::kPositiveHomogeneity:
      c.x = random_vector(gen, n, scale);
      c.parameter = (trial % 10 == 0) ? 0.0 : std::exp(6.0 * gen.uniform01() - 3.0);
      break;
    case Axiom::kSubadditivity:
      c.x = random_vector(gen, n, scale);
      c.y = random_vector(gen, n, scale);
      break;
    case Axiom::kLawInvariance: {
      c.x = random_vector(gen, n, scale);
      c.y = c.x;
      for (std::size_t i = n; i > 1; --i) std::swap(c.y[i - 1], c.y[gen.index(i)]);
      break;
    }
    case Axiom::kComonotonicAdditivity: {
      std::vector<double> u(n);
      for (double& v : u) v = gen.uniform01() < 0.1 ? 0.5 : gen.uniform01();
      c.x = monotone_transform(gen, u, scale);
      c.y = monotone_transform(gen, u, scale);
      break;
    }
  }
  return c;
}

// Greedy simplification keeping the violation: zero entries, then round them.
inline AxiomCase shrink(const AxiomProbe& probe, Axiom axiom, AxiomCase c) {
  if (axiom == Axiom::kLawInvariance || axiom == Axiom::kComonotonicAdditivity) return c;
  auto still_fails = [&](const AxiomCase& candidate) { return probe.evaluate(candidate).violated; };
  for (auto simplify : {+[](double) { return 0.0; }, +[](double v) { return std::round(v); }}) {
    for (auto* vec : {&c.x, &c.y}) {
      for (std::size_t i = 0; i < vec->size(); ++i) {
        const double keep = (*vec)[i];
        const double next = simplify(keep);
        if (next == keep) continue;
        (*vec)[i] = next;
        if (!still_fails(c)) (*vec)[i] = keep;
      }
    }
    const double keep = c.parameter;
    const double next = std::round(keep) == 0.0 && axiom == Axiom::kCashAdditivity
                            ? (keep < 0.0 ? -1.0 : 1.0)
                            : std::round(keep);
    if (next != keep) {
      c.parameter = next;
      if (!still_fails(c)) c.parameter = keep;
    }
  }
  return c;
}

}  // namespace detail

/// Randomised check of (E1)-(E4), optionally law invariance and comonotonic
/// additivity. Each axiom gets `trials` cases from its own stream
/// (rng.stream_id, axiom index); the first violation is shrunk and returned.
inline AxiomReport check_axioms(const Estimator& oracle, std::size_t n, std::size_t trials,
                                RngSpec rng, AxiomOptions options = {}) {
  require(n >= 1 && trials >= 1, ErrorCode::kInvalidArgument, "n and trials must be positive");
  std::vector<Axiom> axioms{Axiom::kMonotonicity, Axiom::kCashAdditivity,
                            Axiom::kPositiveHomogeneity, Axiom::kSubadditivity};
  if (options.law_invariance) axioms.push_back(Axiom::kLawInvariance);
  if (options.comonotonic_additivity) axioms.push_back(Axiom::kComonotonicAdditivity);

  AxiomReport report;
  report.n = n;
  report.trials = trials;
  report.rng = rng;
  for (Axiom axiom : axioms) {
    CounterRng gen({rng.seed, stream_of(rng.stream_id, static_cast<std::uint64_t>(axiom))});
    const detail::AxiomProbe probe(oracle, axiom);
    AxiomResult result{axiom, 0, std::nullopt};
    for (std::size_t t = 0; t < trials; ++t) {
      ++result.trials;
      const detail::AxiomCase c = detail::generate_case(axiom, gen, n, t);
      if (probe.evaluate(c).violated) {
        const detail::AxiomCase small = detail::shrink(probe, axiom, c);
        const detail::Sides sides = probe.evaluate(small);
        std::vector<double> second = small.y;
        if (axiom == Axiom::kMonotonicity) {
          for (std::size_t i = 0; i < n; ++i) second[i] += small.x[i];
        }
        result.counterexample =
            Counterexample{axiom, small.x, second, small.parameter, sides.lhs, sides.rhs};
        break;
      }
    }
    report.results.push_back(std::move(result));
  }
  return report;
}

inline Json to_json(const AxiomReport& r) {
  Json results = Json::array();
  for (const auto& a : r.results) {
    Json entry = {{"axiom", to_string(a.axiom)},
                  {"trials", a.trials},
                  {"pass", !a.counterexample.has_value()}};
    if (a.counterexample) {
      const auto& c = *a.counterexample;
      Json ce = {{"x", c.x}, {"lhs", c.lhs}, {"rhs", c.rhs}};
      if (!c.y.empty()) ce["y"] = c.y;
      if (c.axiom == Axiom::kCashAdditivity) ce["m"] = c.parameter;
      if (c.axiom == Axiom::kPositiveHomogeneity) ce["lambda"] = c.parameter;
      entry["counterexample"] = ce;
    }
    results.push_back(entry);
  }
  return {{"schema", kSchema}, {"n", r.n},         {"trials", r.trials},
          {"seed", r.rng.seed}, {"results", results}, {"pass", r.pass()}};
}

// ---------------------------------------------------------------------------
// Kusuoka plug-in diagnostics

/// Plug-in value with the ES levels i/n <= delta removed from every vertex.
inline SupResult kusuoka_censored(const MixtureSet& m, std::span<const double> es_values,
                                  double delta) {
  require(m.dimension() == es_values.size(), ErrorCode::kLengthMismatch,
          "mixture set dimension differs from the ES values");
  const double dn = static_cast<double>(es_values.size());
  SupResult best{0.0, 0};
  for (std::size_t v = 0; v < m.size(); ++v) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < es_values.size(); ++i) {
      if (static_cast<double>(i + 1) / dn > delta) sum.add(m[v][i] * es_values[i]);
    }
    if (v == 0 || sum.value() > best.value) best = {sum.value(), v};
  }
  return best;
}

/// sup over vertices of the mass on levels i/n <= delta.
inline double tightness_mass(const MixtureSet& m, double delta) {
  const double dn = static_cast<double>(m.dimension());
  double worst = 0.0;
  for (const auto& nu : m.vertices()) {
    double mass = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      if (static_cast<double>(i + 1) / dn <= delta) mass += nu[i];
    }
    worst = std::max(worst, mass);
  }
  return worst;
}

/// A discrete probability measure on (0, 1] given by atoms.
struct LevelMeasure {
  std::vector<double> levels;
  std::vector<double> masses;
};

namespace detail {

inline double es_hat(const std::vector<double>& es_levels, double alpha) {
  return es_levels[ceil_rank(es_levels.size(), alpha) - 1];
}

// nu((i-1)/g, i/g] for i = 1..g.
inline std::vector<double> cell_masses(const LevelMeasure& nu, std::size_t g) {
  require(nu.levels.size() == nu.masses.size(), ErrorCode::kLengthMismatch,
          "level measure needs one mass per level");
  std::vector<double> cells(g, 0.0);
  for (std::size_t k = 0; k < nu.levels.size(); ++k) {
    require(nu.levels[k] > 0.0 && nu.levels[k] <= 1.0, ErrorCode::kAlphaOutOfRange,
            "measure levels must lie in (0, 1]");
    cells[ceil_rank(g, nu.levels[k]) - 1] += nu.masses[k];
  }
  return cells;
}

}  // namespace detail

/// Plug-in on a grid of g cells over a sample of any size N, with
/// ES_hat(alpha) = dES_{ceil(N alpha)/N}: sup_nu sum_i ES_hat(i/g) nu(I_i).
inline double kusuoka_grid_value(std::span<const LevelMeasure> measures, const Sample& x,
                                 std::size_t g) {
  require(!measures.empty() && g >= 1, ErrorCode::kInvalidArgument, "need measures and g >= 1");
  const std::vector<double> es = discrete_es_levels(x);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& nu : measures) {
    const auto cells = detail::cell_masses(nu, g);
    CompensatedSum sum;
    for (std::size_t i = 0; i < g; ++i) {
      sum.add(cells[i] * detail::es_hat(es, static_cast<double>(i + 1) / static_cast<double>(g)));
    }
    best = std::max(best, sum.value());
  }
  return best;
}

/// Bound on |value(g) - value(2g)|: sup_nu sum_i nu(I_i) |ES_hat(i/g) - ES_hat((2i-1)/(2g))|.
inline double grid_refinement_modulus(std::span<const LevelMeasure> measures, const Sample& x,
                                      std::size_t g) {
  const std::vector<double> es = discrete_es_levels(x);
  const double dg = static_cast<double>(g);
  double worst = 0.0;
  for (const auto& nu : measures) {
    const auto cells = detail::cell_masses(nu, g);
    double sum = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      const double right = detail::es_hat(es, static_cast<double>(i + 1) / dg);
      const double mid = detail::es_hat(es, (2.0 * static_cast<double>(i) + 1.0) / (2.0 * dg));
      sum += cells[i] * std::abs(right - mid);
    }
    worst = std::max(worst, sum);
  }
  return worst;
}

}  // namespace riskcore

#endif  // RISKCORE_HARNESS_HPP_
