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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "riskcore/harness.hpp"
#include "test_util.hpp"

namespace riskcore {
namespace {

using Dist = ReferenceDistribution;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

Sample as_sample(std::span<const double> x) { return Sample({x.begin(), x.end()}); }

double sample_sd(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

TEST(LipschitzClassTest, BundledConstants) {
  const LipschitzClass cls = LipschitzClass::bundled();
  EXPECT_EQ(cls.size(), 5u);
  const double c5 = 5.0 / -std::expm1(-5.0);
  EXPECT_DOUBLE_EQ(cls.class_c(), c5);
  EXPECT_DOUBLE_EQ(cls.class_l(), 5.0 * c5);
  for (const Spectrum& phi : cls.members()) EXPECT_LE(phi.bound(), cls.class_c());
}

TEST(LipschitzClassTest, RejectsNonLipschitzMembers) {
  EXPECT_EQ(code_of([] { LipschitzClass({Spectrum::expected_shortfall(0.1)}); }),
            ErrorCode::kInvalidSpectrum);
  EXPECT_EQ(code_of([] { LipschitzClass(std::vector<Spectrum>{}); }), ErrorCode::kEmptySet);
  // A custom member whose declared constant understates its slope.
  const Spectrum liar = Spectrum::custom([](double u) { return 2.0 * (1.0 - u); }, 2.0, 0.5);
  EXPECT_EQ(code_of([&] { LipschitzClass({liar}); }), ErrorCode::kInvalidSpectrum);
}

// --- axioms -----------------------------------------------------------------

TEST(AxiomTest, DiscreteEsPasses) {
  auto des = [](std::span<const double> x) { return discrete_es(as_sample(x), 2); };
  const AxiomReport r = check_axioms(des, 3, 10000, {1, 0});
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.results.size(), 6u);
  for (const auto& a : r.results) EXPECT_EQ(a.trials, 10000u);
}

TEST(AxiomTest, StandardDeviationFailsCashAdditivity) {
  const AxiomReport r = check_axioms(sample_sd, 5, 1000, {1, 0});
  EXPECT_FALSE(r.pass());
  const AxiomResult* cash = r.find(Axiom::kCashAdditivity);
  ASSERT_NE(cash, nullptr);
  ASSERT_TRUE(cash->counterexample.has_value());
  const Counterexample& c = *cash->counterexample;
  EXPECT_NE(c.parameter, 0.0);
  // The counterexample is concrete: re-evaluating both sides reproduces it.
  std::vector<double> shifted = c.x;
  for (double& v : shifted) v += c.parameter;
  EXPECT_EQ(c.lhs, sample_sd(shifted));
  EXPECT_EQ(c.rhs, sample_sd(c.x) - c.parameter);
  // Shrinking leaves a small witness.
  EXPECT_EQ(std::count(c.x.begin(), c.x.end(), 0.0), 5);
  EXPECT_EQ(std::abs(c.parameter), 1.0);
}

TEST(AxiomTest, CounterexamplesForBrokenEstimators) {
  auto neg_max = [](std::span<const double> x) { return -*std::max_element(x.begin(), x.end()); };
  const AxiomReport sub = check_axioms(neg_max, 4, 2000, {3, 0});
  ASSERT_TRUE(sub.find(Axiom::kSubadditivity)->counterexample.has_value());
  EXPECT_FALSE(sub.find(Axiom::kMonotonicity)->counterexample.has_value());

  auto first = [](std::span<const double> x) { return -x[0]; };
  const AxiomReport law = check_axioms(first, 4, 2000, {3, 0});
  EXPECT_TRUE(law.find(Axiom::kLawInvariance)->counterexample.has_value());
  EXPECT_FALSE(law.find(Axiom::kSubadditivity)->counterexample.has_value());

  auto increasing = [](std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); };
  const AxiomReport mono = check_axioms(increasing, 3, 500, {3, 0});
  const auto& m = mono.find(Axiom::kMonotonicity)->counterexample;
  ASSERT_TRUE(m.has_value());
  for (std::size_t i = 0; i < m->x.size(); ++i) EXPECT_GE(m->y[i], m->x[i]);
  EXPECT_LT(m->lhs, m->rhs);

  auto offset = [](std::span<const double> x) { return 1.0 - *std::min_element(x.begin(), x.end()); };
  const AxiomReport hom = check_axioms(offset, 3, 100, {3, 0});
  const auto& h = hom.find(Axiom::kPositiveHomogeneity)->counterexample;
  ASSERT_TRUE(h.has_value());
}

TEST(AxiomTest, ZeroScalingMustGiveZero) {
  auto shifted = [](std::span<const double> x) { return 1e-3 - *std::min_element(x.begin(), x.end()); };
  const AxiomReport r = check_axioms(shifted, 2, 10, {5, 0});
  const auto& h = r.find(Axiom::kPositiveHomogeneity)->counterexample;
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(h->parameter, 0.0);
}

TEST(AxiomTest, BuiltInEstimatorsPass) {
  testing::Engine g(77);
  std::vector<std::pair<std::string, Estimator>> estimators;
  for (const Spectrum& phi : {Spectrum::uniform(), Spectrum::linear(2.0), Spectrum::exponential(5.0),
                              Spectrum::expected_shortfall(0.3)}) {
    estimators.emplace_back("spectral", [phi](std::span<const double> x) {
      return spectral_estimate(phi, as_sample(x));
    });
  }
  const Mixture mu(testing::random_simplex(g, 6));
  estimators.emplace_back("mixture",
                          [mu](std::span<const double> x) { return mixture_estimate(mu, as_sample(x)); });
  for (const auto& [name, est] : estimators) {
    const AxiomReport r = check_axioms(est, 6, 2000, {9, 0});
    EXPECT_TRUE(r.pass()) << name << " " << dump_json(to_json(r));
  }

  std::vector<WeightVector> sorted_vertices, free_vertices;
  for (int v = 0; v < 4; ++v) {
    sorted_vertices.emplace_back(testing::random_monotone_simplex(g, 6));
    free_vertices.emplace_back(testing::random_simplex(g, 6));
  }
  const RepresentingSet sorted(sorted_vertices, true);
  const RepresentingSet unsorted(free_vertices, false);
  auto sup_sorted = [&](std::span<const double> x) { return robust_sup(sorted, as_sample(x)).value; };
  auto sup_free = [&](std::span<const double> x) { return robust_sup(unsorted, as_sample(x)).value; };
  // A supremum of linear functionals is law invariant only on the sorted domain and
  // comonotonic additive only for a single vertex.
  EXPECT_TRUE(check_axioms(sup_sorted, 6, 2000, {9, 1}, {true, false}).pass());
  EXPECT_TRUE(check_axioms(sup_free, 6, 2000, {9, 2}, {false, false}).pass());
  const AxiomReport free_full = check_axioms(sup_free, 6, 2000, {9, 2});
  EXPECT_TRUE(free_full.find(Axiom::kLawInvariance)->counterexample.has_value());
}

TEST(AxiomTest, ReportJsonCarriesCounterexample) {
  const Json j = to_json(check_axioms(sample_sd, 5, 100, {1, 0}));
  EXPECT_EQ(j["schema"], kSchema);
  EXPECT_FALSE(j["pass"].get<bool>());
  bool found = false;
  for (const auto& r : j["results"]) {
    if (r["axiom"] == "cash_additivity") {
      found = true;
      EXPECT_TRUE(r["counterexample"].contains("m"));
      EXPECT_EQ(r["counterexample"]["x"].size(), 5u);
    }
  }
  EXPECT_TRUE(found);
}

TEST(AxiomTest, OracleFailureOnNonFinite) {
  auto bad = [](std::span<const double>) { return std::numeric_limits<double>::infinity(); };
  EXPECT_EQ(code_of([&] { check_axioms(bad, 2, 1, {0, 0}); }), ErrorCode::kOracleFailure);
}

// --- experiments at reduced scale ---------------------------------------------

TEST(ConsistencyTest, SingleMemberExamples) {
  ConsistencyConfig uniform_cfg;
  uniform_cfg.members = {Spectrum::uniform()};
  uniform_cfg.reps = 1;
  const ExperimentReport u = consistency_sweep(uniform_cfg, 1);
  EXPECT_TRUE(u.pass);
  EXPECT_LT(u.body["table"][0]["max_error"].get<double>(), 0.01);

  ConsistencyConfig linear_cfg = uniform_cfg;
  linear_cfg.members = {Spectrum::linear(2.0)};
  EXPECT_NEAR(population_spectral_risk(Dist::uniform(0, 1), Spectrum::linear(2.0)), -1.0 / 3.0,
              1e-12);
  EXPECT_TRUE(consistency_sweep(linear_cfg, 1).pass);
}

TEST(ConsistencyTest, DeterministicAcrossThreads) {
  ConsistencyConfig cfg;
  cfg.n_grid = {10, 10, 500};
  cfg.reps = 7;
  cfg.dist = Dist::normal(0, 1);
  const std::string a = consistency_sweep(cfg, 42, 1).to_json_string();
  const std::string b = consistency_sweep(cfg, 42, 3).to_json_string();
  EXPECT_EQ(a, b);
  EXPECT_NE(consistency_sweep(cfg, 43, 1).to_json_string(), a);
}

TEST(RateTest, Preconditions) {
  RateConfig cfg;
  cfg.n_grid = {100, 1000};
  EXPECT_EQ(code_of([&] { rate_experiment(cfg, 1); }), ErrorCode::kInvalidArgument);
  cfg.n_grid = {100, 10000};
  cfg.reps = 10;
  EXPECT_EQ(code_of([&] { rate_experiment(cfg, 1); }), ErrorCode::kInvalidArgument);
  cfg.reps = 30;
  cfg.dist = Dist::point_mass(2.0);
  EXPECT_EQ(code_of([&] { rate_experiment(cfg, 1); }), ErrorCode::kDegenerateFit);
}

TEST(RateTest, ReducedScaleSlopeAndDeterminism) {
  RateConfig cfg;
  cfg.n_grid = {100, 316, 1000, 3162, 10000};
  cfg.reps = 40;
  const ExperimentReport a = rate_experiment(cfg, 5, 1);
  const ExperimentReport b = rate_experiment(cfg, 5, 2);
  EXPECT_EQ(a.to_json_string(), b.to_json_string());
  const double slope = a.body["slope"].get<double>();
  EXPECT_GT(slope, -0.8);
  EXPECT_LT(slope, -0.2);
}

TEST(CltTest, Preconditions) {
  CltConfig cfg;
  cfg.spectrum = Spectrum::expected_shortfall(0.05);
  EXPECT_EQ(code_of([&] { clt_check(cfg, 1); }), ErrorCode::kNotApplicable);
  cfg.spectrum = Spectrum::uniform();
  cfg.reps = 100;
  EXPECT_EQ(code_of([&] { clt_check(cfg, 1); }), ErrorCode::kInvalidArgument);
  cfg.reps = 500;
  cfg.dist = Dist::point_mass(0);
  EXPECT_EQ(code_of([&] { clt_check(cfg, 1); }), ErrorCode::kDegenerateVariance);
}

TEST(CltTest, ReducedScaleRun) {
  CltConfig cfg;
  cfg.n = 400;
  cfg.reps = 600;
  cfg.threshold = 0.08;
  const ExperimentReport r = clt_check(cfg, 3, 2);
  EXPECT_TRUE(r.pass) << r.to_json_string();
  EXPECT_LE(r.body["d_K_m"].get<double>(), r.body["d_K"].get<double>());
  EXPECT_EQ(r.to_json_string(), clt_check(cfg, 3, 1).to_json_string());
}

TEST(BootstrapCheckTest, SinglePointIsDegenerate) {
  BootstrapConfig cfg;
  cfg.n = 1;
  cfg.replicates = 50;
  const ExperimentReport r = bootstrap_check(cfg, 1);
  EXPECT_TRUE(r.body["degenerate"].get<bool>());
  EXPECT_FALSE(r.pass);
}

TEST(BootstrapCheckTest, ReducedScaleRun) {
  BootstrapConfig cfg;
  cfg.n = 500;
  cfg.replicates = 400;
  cfg.threshold = 0.15;
  const ExperimentReport a = bootstrap_check(cfg, 8, 1);
  EXPECT_FALSE(a.body["degenerate"].get<bool>());
  EXPECT_EQ(a.to_json_string(), bootstrap_check(cfg, 8, 4).to_json_string());
  EXPECT_LE(a.body["d_K_m"].get<double>(), a.body["d_K"].get<double>());
}

TEST(ReportTest, ReplaysFromEmbeddedConfig) {
  CltConfig cfg;
  cfg.spectrum = Spectrum::exponential(2.0);
  cfg.dist = Dist::exponential(1.5);
  cfg.n = 200;
  cfg.reps = 500;
  const ExperimentReport first = clt_check(cfg, 12);
  const Json body = Json::parse(first.to_json_string());
  const ExperimentReport replay =
      run_experiment(body["config"]["experiment"].get<std::string>(), body["config"],
                     body["seed"].get<std::uint64_t>());
  EXPECT_EQ(replay.to_json_string(), first.to_json_string());

  RateConfig rate;
  rate.n_grid = {50, 500, 5000};
  rate.reps = 30;
  rate.members = {Spectrum::piecewise_linear({{0, 1.5}, {1, 0.5}}), Spectrum::linear(1.0)};
  const ExperimentReport r = rate_experiment(rate, 2);
  const Json rb = Json::parse(r.to_json_string());
  EXPECT_EQ(run_experiment("rate", rb["config"], 2).to_json_string(), r.to_json_string());
}

TEST(ReportTest, ConfigParsingRejectsUnknownFields) {
  EXPECT_EQ(code_of([] { clt_config_from_json(Json::parse(R"({"n": 10, "bogus": 1})")); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { run_experiment("clt", Json::parse(R"({"experiment": "rate"})"), 1); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { run_experiment("nope", Json::object(), 1); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { clt_config_from_json(Json::parse(R"({"schema": "riskcore/2"})")); }),
            ErrorCode::kParseError);
  const BootstrapConfig b = bootstrap_config_from_json(Json::parse(R"({"B": 12, "n": 30})"));
  EXPECT_EQ(b.replicates, 12u);
  EXPECT_EQ(b.n, 30u);
}

// --- Kusuoka surrogates -----------------------------------------------------

TEST(KusuokaTest, TightnessBound) {
  testing::Engine g(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(g() % 60);
    std::vector<Mixture> vertices;
    for (int v = 0; v < 3; ++v) vertices.emplace_back(testing::random_simplex(g, n));
    const MixtureSet m(vertices);
    const Sample x(testing::random_sample(g, n));
    const std::vector<double> es = discrete_es_levels(x);
    const double delta = unit(g);
    const double eps = tightness_mass(m, delta);
    const double full = kusuoka_plugin(m, es).value;
    const double censored = kusuoka_censored(m, es, delta).value;
    EXPECT_LE(std::abs(full - censored), (1.0 + 1.0) * x.sup_norm() * eps + 1e-12 * (1 + x.sup_norm()));
  }
}

TEST(KusuokaTest, GridRefinementModulus) {
  testing::Engine g(32);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Sample x(testing::random_sample(g, 1 + static_cast<std::size_t>(g() % 300)));
    std::vector<LevelMeasure> measures(2);
    for (auto& nu : measures) {
      const std::size_t atoms = 1 + static_cast<std::size_t>(g() % 6);
      nu.levels.resize(atoms);
      for (double& l : nu.levels) l = std::max(1e-6, unit(g));
      nu.masses = testing::random_simplex(g, atoms);
    }
    for (std::size_t grid : {1u, 4u, 16u, 50u}) {
      const double coarse = kusuoka_grid_value(measures, x, grid);
      const double fine = kusuoka_grid_value(measures, x, 2 * grid);
      EXPECT_LE(std::abs(coarse - fine),
                grid_refinement_modulus(measures, x, grid) + 1e-12 * (1 + x.sup_norm()));
    }
  }
}

TEST(KusuokaTest, GridValueMatchesPluginOnNativeGrid) {
  const Sample x{3, -1, 2, 0.5};
  std::vector<LevelMeasure> measures{{{0.25, 1.0}, {0.5, 0.5}}, {{0.75}, {1.0}}};
  const MixtureSet m({Mixture{0.5, 0, 0, 0.5}, Mixture{0, 0, 1, 0}});
  EXPECT_NEAR(kusuoka_grid_value(measures, x, 4), kusuoka_plugin(m, x).value, 1e-15);
}

}  // namespace
}  // namespace riskcore
