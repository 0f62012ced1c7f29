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

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "riskcore/asymptotics.hpp"
#include "test_util.hpp"

namespace riskcore {
namespace {

using Dist = ReferenceDistribution;

TEST(InfluenceTest, Examples) {
  EXPECT_NEAR(influence_function(Spectrum::uniform(), Dist::uniform(0, 1), 0.3), 0.2, 1e-8);
  EXPECT_NEAR(influence_function(Spectrum::uniform(), Dist::uniform(0, 1), 0.5), 0.0, 1e-8);
  EXPECT_NEAR(influence_function(Spectrum::uniform(), Dist::normal(0, 1), 0.0), 0.0, 1e-8);
  EXPECT_THROW(influence_function(Spectrum::uniform(), Dist::point_mass(0), 0.0), Error);
}

TEST(InfluenceTest, UniformSpectrumIsCentredLoss) {
  // With phi = 1 the influence function is E[X] - x.
  for (const Dist& d : {Dist::normal(0.3, 2.0), Dist::exponential(1.5), Dist::uniform(-1, 3)}) {
    for (double u : {0.01, 0.2, 0.5, 0.8, 0.99}) {
      const double x = d.quantile(u);
      EXPECT_NEAR(influence_function(Spectrum::uniform(), d, x), d.mean() - x, 1e-6) << u;
    }
  }
}

TEST(InfluenceTest, MatchesBoostQuadrature) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const Dist d = Dist::normal(0, 1);
  const boost::math::normal_distribution<double> z;
  for (const Spectrum& phi : {Spectrum::linear(2.0), Spectrum::exponential(3.0)}) {
    for (double x : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
      const double f = boost::math::cdf(z, x);
      auto qprime = [&](double a) { return 1.0 / boost::math::pdf(z, boost::math::quantile(z, a)); };
      const double oracle =
          integrator.integrate([&](double a) { return phi.density_unchecked(a) * qprime(a) * (1 - a); },
                               f, 1.0, 1e-12) -
          integrator.integrate([&](double a) { return phi.density_unchecked(a) * qprime(a) * a; },
                               0.0, f, 1e-12);
      EXPECT_NEAR(influence_function(phi, d, x), oracle, 1e-7) << x;
    }
  }
}

TEST(InfluenceTest, BatchedLevelsAgreeWithPointwise) {
  const Spectrum phi = Spectrum::linear(2.0);
  const Dist d = Dist::exponential(1.0);
  const std::vector<double> levels{0.001, 0.1, 0.1, 0.37, 0.5, 0.9, 0.999};
  const auto batched = influence_at_levels(phi, d, levels);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    EXPECT_NEAR(batched[j], influence_function(phi, d, d.quantile(levels[j])), 1e-7);
  }
  EXPECT_THROW(influence_at_levels(phi, d, std::vector<double>{0.5, 0.4}), Error);
}

TEST(VarianceTest, Examples) {
  EXPECT_NEAR(asymptotic_variance(Spectrum::uniform(), Dist::uniform(0, 1)), 1.0 / 12.0, 1e-6);
  EXPECT_NEAR(asymptotic_variance(Spectrum::uniform(), Dist::normal(0, 1)), 1.0, 1e-4);
  try {
    asymptotic_variance(Spectrum::uniform(), Dist::point_mass(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateVariance);
  }
}

TEST(VarianceTest, UniformSpectrumEqualsLawVariance) {
  for (const Dist& d : {Dist::uniform(-2, 5), Dist::normal(1, 0.5), Dist::exponential(2)}) {
    EXPECT_NEAR(asymptotic_variance(Spectrum::uniform(), d), d.variance(), 1e-4 * d.variance());
  }
}

TEST(VarianceTest, LinearSpectrumUniformLawClosedForm) {
  // phi(u) = 2(1-u), q' = 1: sigma^2 = int int (min - ab) 4(1-a)(1-b) = 1/45 * 4 ... by hand:
  // Var(IF) with IF(x) = int_x^1 2(1-a)(1-a) da - int_0^x 2(1-a) a da = 2/3 (1-x)^3 - x^2 + 2x^3/3
  // plus a constant; computed below by exact polynomial moments.
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto IF = [](double x) {
    return 2.0 / 3.0 * std::pow(1 - x, 3) - (x * x - 2.0 * x * x * x / 3.0);
  };
  const double m1 = integrator.integrate(IF, 0.0, 1.0);
  const double m2 = integrator.integrate([&](double x) { return IF(x) * IF(x); }, 0.0, 1.0);
  EXPECT_NEAR(m1, 0.0, 1e-14);
  EXPECT_NEAR(asymptotic_variance(Spectrum::linear(2.0), Dist::uniform(0, 1)), m2, 1e-9);
}

struct Pair {
  Spectrum phi;
  Dist dist;
};

std::vector<Pair> bundled_pairs() {
  return {{Spectrum::uniform(), Dist::uniform(0, 1)},
          {Spectrum::uniform(), Dist::normal(0, 1)},
          {Spectrum::linear(2.0), Dist::normal(0, 1)},
          {Spectrum::exponential(2.0), Dist::uniform(0, 1)},
          {Spectrum::exponential(5.0), Dist::exponential(1.0)}};
}

TEST(VarianceTest, MonteCarloInfluenceWithinFourStandardErrors) {
  std::uint64_t stream = 0;
  for (const Pair& p : bundled_pairs()) {
    const double sigma2 = asymptotic_variance(p.phi, p.dist);
    EXPECT_GE(sigma2, 0.0);
    const InfluenceMoments mc = influence_monte_carlo(p.phi, p.dist, 1'000'000, {2024, stream++});
    EXPECT_LE(std::abs(mc.mean), 4.0 * mc.mean_standard_error);
    EXPECT_LE(std::abs(mc.variance - sigma2), 4.0 * mc.variance_standard_error)
        << "sigma2=" << sigma2 << " mc=" << mc.variance;
  }
}

TEST(BootstrapTest, ResampleExamples) {
  EXPECT_EQ(bootstrap_resample(Sample{7}, {1, 0})[0], 7.0);
  const Sample x{1, 2, 3};
  const Sample a = bootstrap_resample(x, {42, 0});
  const Sample b = bootstrap_resample(x, {42, 0});
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  testing::Engine g(1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto raw = testing::random_sample(g, 1 + trial % 20);
    const std::multiset<double> pool(raw.begin(), raw.end());
    const Sample r = bootstrap_resample(Sample(raw), {7, static_cast<std::uint64_t>(trial)});
    EXPECT_EQ(r.size(), raw.size());
    for (double v : r.values()) EXPECT_TRUE(pool.count(v) > 0);
  }
}

TEST(BootstrapTest, DistributionExamples) {
  const auto constant = bootstrap_distribution(Sample{2, 2, 2, 2}, Spectrum::linear(2), 1, {1, 0});
  ASSERT_EQ(constant.size(), 1u);
  EXPECT_NEAR(constant[0], 0.0, 1e-15);
  const Sample x = draw_sample(Dist::normal(0, 1), 200, {5, 0});
  const auto reps = bootstrap_distribution(x, Spectrum::exponential(2), 300, {5, 1});
  const double bound = std::sqrt(200.0) * 2.0 * Spectrum::exponential(2).bound() * x.sup_norm();
  for (double v : reps) EXPECT_LE(std::abs(v), bound);
}

TEST(BootstrapTest, IndependentOfThreadCount) {
  const Sample x = draw_sample(Dist::normal(0, 1), 500, {11, 3});
  const auto one = bootstrap_distribution(x, Spectrum::linear(2), 400, {11, 0}, 1);
  for (unsigned threads : {2u, 3u, 8u}) {
    const auto many = bootstrap_distribution(x, Spectrum::linear(2), 400, {11, 0}, threads);
    ASSERT_EQ(one.size(), many.size());
    EXPECT_EQ(0, std::memcmp(one.data(), many.data(), one.size() * sizeof(double)));
  }
}

TEST(KolmogorovTest, Examples) {
  EXPECT_DOUBLE_EQ(kolmogorov_distance(Sample{0}, Dist::normal(0, 1)), 0.5);
  EXPECT_DOUBLE_EQ(kolmogorov_distance(Sample{2}, Dist::normal(2, 3)), 0.5);
  for (const Dist& d : {Dist::normal(0, 1), Dist::exponential(2), Dist::uniform(0, 1)}) {
    std::vector<double> x(100);
    for (int i = 0; i < 100; ++i) x[static_cast<std::size_t>(i)] = d.quantile((i + 0.5) / 100.0);
    EXPECT_LE(kolmogorov_distance(Sample(x), d), 0.005 + 1e-9);
  }
  EXPECT_THROW(kolmogorov_distance(Sample{0}, Dist::point_mass(0)), Error);
}

TEST(KolmogorovTest, AgreesWithBruteForceSupremum) {
  testing::Engine g(13);
  const Dist d = Dist::normal(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    auto raw = testing::random_sample(g, 1 + trial % 15);
    for (double& v : raw) v = std::clamp(v, -5.0, 5.0);
    std::sort(raw.begin(), raw.end());
    // The supremum is approached at each jump from the left and attained on the right.
    double brute = 0.0;
    const double n = static_cast<double>(raw.size());
    for (double t : raw) {
      const double left = std::nextafter(t, -1e9);
      const auto below = std::upper_bound(raw.begin(), raw.end(), left) - raw.begin();
      const auto at = std::upper_bound(raw.begin(), raw.end(), t) - raw.begin();
      brute = std::max({brute, std::abs(below / n - d.cdf(left)), std::abs(at / n - d.cdf(t))});
    }
    EXPECT_NEAR(kolmogorov_distance(Sample(raw), d), brute, 1e-12);
  }
}

TEST(TruncatedKolmogorovTest, Examples) {
  EXPECT_DOUBLE_EQ(truncated_kolmogorov(Sample{0}, Dist::normal(0, 1), 1), 0.5);
  EXPECT_THROW(truncated_kolmogorov(Sample{0}, Dist::normal(0, 1), 0), Error);
}

TEST(TruncatedKolmogorovTest, BoundedByFullDistanceAndNested) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Dist d = s % 2 ? Dist::normal(0, 1) : Dist::exponential(1);
    const Sample x = draw_sample(d, 5 + 7 * s, {99, s});
    const double full = kolmogorov_distance(x, d);
    double prev = 0.0;
    for (std::size_t m : {1u, 2u, 4u, 8u, 16u}) {
      const double trunc = truncated_kolmogorov(x, d, m);
      EXPECT_LE(trunc, full + 1e-15);
      EXPECT_GE(trunc, prev);
      prev = trunc;
    }
  }
}

TEST(WassersteinTest, Examples) {
  EXPECT_NEAR(wasserstein1(Sample{0, 1}, Dist::uniform(0, 1)), 0.25, 1e-15);
  EXPECT_EQ(wasserstein1(Sample{3}, Dist::point_mass(3)), 0.0);
  EXPECT_NEAR(wasserstein1(Sample{0.5}, Dist::uniform(0, 1)), 0.25, 1e-15);
}

TEST(WassersteinTest, MatchesQuantileIntegral) {
  // W1 = int_0^1 |q_n - q|, evaluated with Boost per empirical cell.
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (std::uint64_t s = 0; s < 6; ++s) {
    const Dist d = s < 2 ? Dist::normal(0.5, 2) : (s < 4 ? Dist::exponential(3) : Dist::uniform(-1, 1));
    const Sample x = draw_sample(d, 3 + 4 * s, {17, s});
    const SortedSample sorted = sort_sample(x);
    const double n = static_cast<double>(x.size());
    double oracle = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      // Split each cell at the kink u = F(x_{i:n}).
      const double lo = i / n, hi = (i + 1) / n;
      const double kink = std::clamp(d.cdf(sorted[i]), lo, hi);
      auto gap = [&](double u) { return std::abs(sorted[i] - d.quantile(u)); };
      if (kink > lo) oracle += integrator.integrate(gap, lo, kink, 1e-13);
      if (kink < hi) oracle += integrator.integrate(gap, kink, hi, 1e-13);
    }
    EXPECT_NEAR(wasserstein1(x, d), oracle, 1e-8);
  }
}

}  // namespace
}  // namespace riskcore
