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

#ifndef RISKCORE_ASYMPTOTICS_HPP_
#define RISKCORE_ASYMPTOTICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "riskcore/core.hpp"
#include "riskcore/error.hpp"
#include "riskcore/estimators.hpp"
#include "riskcore/numeric.hpp"
#include "riskcore/parallel.hpp"
#include "riskcore/population.hpp"
#include "riskcore/random.hpp"
#include "riskcore/spectra.hpp"

namespace riskcore {

/// n i.i.d. draws of dist by quantile inversion of the stream's uniforms.
inline Sample draw_sample(const ReferenceDistribution& dist, std::size_t n, RngSpec rng) {
  require(n >= 1, ErrorCode::kInvalidArgument, "sample size must be positive");
  CounterRng gen(rng);
  std::vector<double> x(n);
  for (double& v : x) v = dist.quantile(gen.uniform01());
  return Sample(std::move(x));
}

namespace detail {

inline constexpr double kInfluenceTailCut = 1e-12;

inline void require_density(const ReferenceDistribution& dist) {
  require(dist.continuous(), ErrorCode::kNotApplicable,
          "the distribution has no density (point mass)");
}

// Cut points in [lo, hi]: the ends plus every spectrum breakpoint strictly inside.
inline std::vector<double> cuts_between(const Spectrum& phi, double lo, double hi) {
  std::vector<double> cuts{lo};
  for (double b : phi.breakpoints()) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  return cuts;
}

}  // namespace detail

/// IF_phi(x) = int_0^1 phi(a) q'(a) (1{x <= q(a)} - a) da
///           = int_{F(x)}^1 phi q' (1 - a) da - int_0^{F(x)} phi q' a da.
/// Adaptive Simpson at absolute tolerance 1e-8 on each side of F(x).
inline double influence_function(const Spectrum& phi, const ReferenceDistribution& dist,
                                 double x) {
  detail::require_density(dist);
  const double lo = detail::kInfluenceTailCut;
  const double hi = 1.0 - detail::kInfluenceTailCut;
  const double jump = std::clamp(dist.cdf(x), lo, hi);
  QuadratureOptions opt;
  opt.abs_tol = 1e-8;
  auto below = [&](double a) { return phi.density_unchecked(a) * dist.quantile_derivative(a) * a; };
  auto above = [&](double a) {
    return phi.density_unchecked(a) * dist.quantile_derivative(a) * (1.0 - a);
  };
  const auto left_cuts = detail::cuts_between(phi, lo, jump);
  const auto right_cuts = detail::cuts_between(phi, jump, hi);
  return adaptive_simpson_split(above, right_cuts, opt) -
         adaptive_simpson_split(below, left_cuts, opt);
}

/// IF_phi(q(u_j)) for non-decreasing levels u_j in (0, 1), sharing one sweep of
/// cumulative integrals between consecutive levels.
inline std::vector<double> influence_at_levels(const Spectrum& phi,
                                               const ReferenceDistribution& dist,
                                               std::span<const double> levels) {
  detail::require_density(dist);
  const double lo = detail::kInfluenceTailCut;
  const double hi = 1.0 - detail::kInfluenceTailCut;
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  opt.initial_panels = 1;
  auto below = [&](double a) { return phi.density_unchecked(a) * dist.quantile_derivative(a) * a; };
  auto above = [&](double a) {
    return phi.density_unchecked(a) * dist.quantile_derivative(a) * (1.0 - a);
  };

  std::vector<double> points;
  points.reserve(levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j) {
    require(j == 0 || levels[j] >= levels[j - 1], ErrorCode::kInvalidArgument,
            "levels must be non-decreasing");
    points.push_back(std::clamp(levels[j], lo, hi));
  }

  std::vector<double> cum_below(points.size());
  std::vector<double> cum_above(points.size());
  CompensatedSum run_below, run_above;
  double at = lo;
  // The lower integrand a q'(a) is never needed beyond the last level, and near
  // a = 1 it grows like q' itself, so the final stretch integrates only the upper one.
  auto advance = [&](double to, bool lower) {
    if (to <= at) return;
    const auto cuts = detail::cuts_between(phi, at, to);
    if (lower) run_below.add(adaptive_simpson_split(below, cuts, opt));
    run_above.add(adaptive_simpson_split(above, cuts, opt));
    at = to;
  };
  for (std::size_t j = 0; j < points.size(); ++j) {
    advance(points[j], true);
    cum_below[j] = run_below.value();
    cum_above[j] = run_above.value();
  }
  advance(hi, false);
  const double total_above = run_above.value();

  std::vector<double> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    out[j] = (total_above - cum_above[j]) - cum_below[j];
  }
  return out;
}

inline constexpr double kVarianceTailCut = 1e-6;

/// sigma^2 = int int (min(a,b) - ab) phi(a) phi(b) q'(a) q'(b) da db over
/// [delta, 1 - delta]^2, delta = 1e-6, evaluated as the iterated integral
/// 2 int (1 - b) phi(b) q'(b) [int_delta^b a phi(a) q'(a) da] db with adaptive
/// Simpson at relative tolerance 1e-6 outside and 1e-10 inside.
inline double asymptotic_variance(const Spectrum& phi, const ReferenceDistribution& dist) {
  require(dist.continuous(), ErrorCode::kDegenerateVariance,
          "the asymptotic variance is degenerate for a point mass");
  const double lo = kVarianceTailCut;
  const double hi = 1.0 - kVarianceTailCut;
  QuadratureOptions inner_opt;
  inner_opt.abs_tol = 1e-14;
  inner_opt.rel_tol = 1e-10;
  inner_opt.initial_panels = 4;
  QuadratureOptions outer_opt;
  outer_opt.abs_tol = 1e-14;
  outer_opt.rel_tol = 1e-6;
  outer_opt.initial_panels = 32;

  auto inner = [&](double b) {
    return adaptive_simpson_split(
        [&](double a) { return a * phi.density_unchecked(a) * dist.quantile_derivative(a); },
        detail::cuts_between(phi, lo, b), inner_opt);
  };
  auto outer = [&](double b) {
    const double w = (1.0 - b) * phi.density_unchecked(b) * dist.quantile_derivative(b);
    return w == 0.0 ? 0.0 : w * inner(b);
  };
  double sigma2 = 0.0;
  try {
    sigma2 = 2.0 * adaptive_simpson_split(outer, detail::cuts_between(phi, lo, hi), outer_opt);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kQuadratureFailure) {
      fail(ErrorCode::kNonFiniteVariance, e.what());
    }
    throw;
  }
  require(std::isfinite(sigma2), ErrorCode::kNonFiniteVariance, "variance integral diverged");
  require(sigma2 > 1e-12, ErrorCode::kDegenerateVariance,
          "asymptotic variance is zero; the limit law is degenerate");
  return sigma2;
}

struct InfluenceMoments {
  std::size_t draws = 0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_standard_error = 0.0;
  double variance_standard_error = 0.0;
};

/// Monte Carlo moments of IF_phi(X) from `draws` i.i.d. draws X = q(U).
inline InfluenceMoments influence_monte_carlo(const Spectrum& phi,
                                              const ReferenceDistribution& dist,
                                              std::size_t draws, RngSpec rng) {
  require(draws >= 2, ErrorCode::kInvalidArgument, "need at least two draws");
  CounterRng gen(rng);
  std::vector<double> u(draws);
  for (double& v : u) v = gen.uniform01();
  std::sort(u.begin(), u.end());
  const std::vector<double> values = influence_at_levels(phi, dist, u);
  const double n = static_cast<double>(draws);
  const double mean = compensated_sum(values) / n;
  CompensatedSum m2, m4;
  for (double v : values) {
    const double d = v - mean;
    m2.add(d * d);
    m4.add(d * d * d * d);
  }
  InfluenceMoments out;
  out.draws = draws;
  out.mean = mean;
  out.variance = m2.value() / (n - 1.0);
  const double mu2 = m2.value() / n;
  const double mu4 = m4.value() / n;
  out.mean_standard_error = std::sqrt(out.variance / n);
  out.variance_standard_error = std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / n);
  return out;
}

/// Efron resample: x*_i = x_{U_i} with U_i uniform on indices.
inline Sample bootstrap_resample(const Sample& x, RngSpec rng) {
  CounterRng gen(rng);
  std::vector<double> out(x.size());
  for (double& v : out) v = x[gen.index(x.size())];
  return Sample(std::move(out));
}

/// sqrt(n) (rho_hat(x*) - rho_hat(x)) for B resamples; replicate b draws from stream
/// stream_of(rng.stream_id, b), so the output is independent of `threads`.
inline std::vector<double> bootstrap_distribution(const Sample& x, const Spectrum& phi,
                                                  std::size_t replicates, RngSpec rng,
                                                  unsigned threads = 1) {
  require(replicates >= 1, ErrorCode::kInvalidArgument, "B must be positive");
  const WeightVector a = canonical_weights(phi, x.size());
  const double base = l_estimate(a, x, true);
  const double root_n = std::sqrt(static_cast<double>(x.size()));
  std::vector<double> out(replicates);
  parallel_for(replicates, threads, [&](std::size_t b) {
    const Sample resampled = bootstrap_resample(x, {rng.seed, stream_of(rng.stream_id, b)});
    out[b] = root_n * (l_estimate(a, resampled, true) - base);
  });
  return out;
}

inline double kolmogorov_distance(std::span<const double> sample,
                                  const std::function<double(double)>& cdf) {
  require(!sample.empty(), ErrorCode::kEmptyInput, "sample is empty");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g = cdf(s[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - g),
                  std::abs(static_cast<double>(i) / n - g)});
  }
  return d;
}

/// sup_t |F_n(t) - G(t)|, exact over the order statistics.
inline double kolmogorov_distance(const Sample& sample, const ReferenceDistribution& dist) {
  require(dist.continuous(), ErrorCode::kNotApplicable,
          "Kolmogorov distance needs a continuous reference law");
  return kolmogorov_distance(sample.values(), [&](double t) { return dist.cdf(t); });
}

/// max over t in {-m, -m + 1/m, ..., m} (2m^2 + 1 points) of |F_n(t) - G(t)|.
inline double truncated_kolmogorov(std::span<const double> sample,
                                   const std::function<double(double)>& cdf, std::size_t m) {
  require(m >= 1, ErrorCode::kInvalidArgument, "m must be positive");
  require(!sample.empty(), ErrorCode::kEmptyInput, "sample is empty");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  const auto mm = static_cast<long long>(m);
  double d = 0.0;
  for (long long j = 0; j <= 2 * mm * mm; ++j) {
    const double t = static_cast<double>(j - mm * mm) / static_cast<double>(mm);
    const auto count = std::upper_bound(s.begin(), s.end(), t) - s.begin();
    d = std::max(d, std::abs(static_cast<double>(count) / n - cdf(t)));
  }
  return d;
}

inline double truncated_kolmogorov(const Sample& sample, const ReferenceDistribution& dist,
                                   std::size_t m) {
  require(dist.continuous(), ErrorCode::kNotApplicable,
          "Kolmogorov distance needs a continuous reference law");
  return truncated_kolmogorov(sample.values(), [&](double t) { return dist.cdf(t); }, m);
}

/// W1 = int |F_n - F| dx, exact per segment between order statistics via the
/// integrated CDF, with closed-form tails below x_{1:n} and above x_{n:n}.
inline double wasserstein1(const Sample& sample, const ReferenceDistribution& dist) {
  const SortedSample s = sort_sample(sample);
  const std::size_t n = s.size();
  const double dn = static_cast<double>(n);
  if (dist.kind() == DistributionKind::kPointMass) {
    CompensatedSum sum;
    for (double v : s.values()) sum.add(std::abs(v - dist.mean()));
    return sum.value() / dn;
  }
  CompensatedSum total;
  total.add(dist.integrated_cdf(s[0]));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double lo = s[i];
    const double hi = s[i + 1];
    if (hi <= lo) continue;
    const double level = static_cast<double>(i + 1) / dn;
    const double cross = std::clamp(dist.quantile(level), lo, hi);
    const double psi_lo = dist.integrated_cdf(lo);
    const double psi_cross = dist.integrated_cdf(cross);
    const double psi_hi = dist.integrated_cdf(hi);
    total.add(level * (cross - lo) - (psi_cross - psi_lo));
    total.add((psi_hi - psi_cross) - level * (hi - cross));
  }
  total.add(dist.integrated_survival(s[n - 1]));
  return total.value();
}

}  // namespace riskcore

#endif  // RISKCORE_ASYMPTOTICS_HPP_
