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

#ifndef RISKCORE_ESTIMATORS_HPP_
#define RISKCORE_ESTIMATORS_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "riskcore/core.hpp"
#include "riskcore/error.hpp"
#include "riskcore/numeric.hpp"
#include "riskcore/spectra.hpp"

namespace riskcore {

/// A risk estimator on R^n, e.g. an L-estimator or an external process.
using Estimator = std::function<double(std::span<const double>)>;

/// dES_{k/n}(x) = -(1/k) sum_{i<=k} x_{i:n}.
inline double discrete_es(const SortedSample& s, std::size_t k) {
  if (!(k >= 1 && k <= s.size())) {
    fail(ErrorCode::kKOutOfRange,
         "k must lie in [1, " + std::to_string(s.size()) + "], got " + std::to_string(k));
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < k; ++i) sum.add(s[i]);
  return -sum.value() / static_cast<double>(k);
}

inline double discrete_es(const Sample& x, std::size_t k) {
  if (!(k >= 1 && k <= x.size())) {
    fail(ErrorCode::kKOutOfRange,
         "k must lie in [1, " + std::to_string(x.size()) + "], got " + std::to_string(k));
  }
  return discrete_es(sort_sample(x), k);
}

/// dES_{k/n}(x) for every k = 1..n.
inline std::vector<double> discrete_es_levels(const SortedSample& s) {
  std::vector<double> out(s.size());
  CompensatedSum prefix;
  for (std::size_t k = 0; k < s.size(); ++k) {
    prefix.add(s[k]);
    out[k] = -prefix.value() / static_cast<double>(k + 1);
  }
  return out;
}

inline std::vector<double> discrete_es_levels(const Sample& x) {
  return discrete_es_levels(sort_sample(x));
}

namespace detail {

inline double weighted_loss(std::span<const double> a, std::span<const double> x) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < a.size(); ++i) sum.add(a[i] * -x[i]);
  return sum.value();
}

}  // namespace detail

/// sum_i a_i (-x_{i:n}) when sorted_domain, otherwise sum_i a_i (-x_i).
inline double l_estimate(const WeightVector& a, const Sample& x, bool sorted_domain) {
  if (!(a.size() == x.size())) {
    fail(ErrorCode::kLengthMismatch,
         "weights have length " + std::to_string(a.size()) + ", sample has " + std::to_string(x.size()));
  }
  if (!sorted_domain) return detail::weighted_loss(a.values(), x.values());
  return detail::weighted_loss(a.values(), sort_sample(x).values());
}

inline double l_estimate(const WeightVector& a, const SortedSample& s) {
  require(a.size() == s.size(), ErrorCode::kLengthMismatch, "weight/sample length mismatch");
  return detail::weighted_loss(a.values(), s.values());
}

/// Canonical spectral plug-in estimator with weights a_{i,n}(phi).
inline double spectral_estimate(const Spectrum& phi, const Sample& x) {
  return l_estimate(canonical_weights(phi, x.size()), x, true);
}

/// sum_k mu_k dES_{k/n}(x).
inline double mixture_estimate(const Mixture& mu, const Sample& x) {
  if (!(mu.size() == x.size())) {
    fail(ErrorCode::kLengthMismatch,
         "mixture has length " + std::to_string(mu.size()) + ", sample has " + std::to_string(x.size()));
  }
  const std::vector<double> es = discrete_es_levels(x);
  CompensatedSum sum;
  for (std::size_t k = 0; k < es.size(); ++k) sum.add(mu[k] * es[k]);
  return sum.value();
}

struct SupResult {
  double value;
  std::size_t argmax_index;
};

/// Maximum of the linear functional over the vertices; ties go to the lowest index.
inline SupResult robust_sup(const RepresentingSet& m, const Sample& x) {
  if (!(m.dimension() == x.size())) {
    fail(ErrorCode::kLengthMismatch,
         "representing set has dimension " + std::to_string(m.dimension()) + ", sample has " + std::to_string(x.size()));
  }
  std::vector<double> sorted;
  std::span<const double> domain = x.values();
  if (m.sorted_domain()) {
    const SortedSample s = sort_sample(x);
    sorted.assign(s.values().begin(), s.values().end());
    domain = sorted;
  }
  SupResult best{detail::weighted_loss(m[0].values(), domain), 0};
  for (std::size_t v = 1; v < m.size(); ++v) {
    const double value = detail::weighted_loss(m[v].values(), domain);
    if (value > best.value) best = {value, v};
  }
  return best;
}

/// max over mixture vertices nu of sum_i nu_i es_values_i.
inline SupResult kusuoka_plugin(const MixtureSet& m, std::span<const double> es_values) {
  if (!(m.dimension() == es_values.size())) {
    fail(ErrorCode::kLengthMismatch,
         "mixture set has dimension " + std::to_string(m.dimension()) + ", got " + std::to_string(es_values.size()) + " ES values");
  }
  for (double v : es_values) {
    require(std::isfinite(v), ErrorCode::kNonFiniteInput, "ES value is not finite");
  }
  SupResult best{0.0, 0};
  for (std::size_t v = 0; v < m.size(); ++v) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < es_values.size(); ++i) sum.add(m[v][i] * es_values[i]);
    if (v == 0 || sum.value() > best.value) best = {sum.value(), v};
  }
  return best;
}

/// Default per-level estimator: dES at levels i/n.
inline SupResult kusuoka_plugin(const MixtureSet& m, const Sample& x) {
  require(m.dimension() == x.size(), ErrorCode::kLengthMismatch,
          "mixture set dimension differs from the sample size");
  const std::vector<double> es = discrete_es_levels(x);
  return kusuoka_plugin(m, es);
}

inline constexpr double kRecoverySlack = 1e-9;

/// Recovers the unique non-increasing weights of a comonotonic law-invariant CRE
/// by probing x^(k) = (-1, ..., -1, 0, ..., 0) with k entries equal to -1:
/// a_k = oracle(x^(k)) - oracle(x^(k-1)), x^(0) being the zero vector.
///
/// Violations within 1e-9 are clamped and renormalised; larger ones raise
/// NotMonotoneRecovered or NotNormalised. Probes are issued sequentially.
inline WeightVector recover_comonotonic_weights(const Estimator& oracle, std::size_t n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "n must be positive");
  std::vector<double> probe(n, 0.0);
  auto ask = [&]() {
    const double v = oracle(probe);
    require(std::isfinite(v), ErrorCode::kOracleFailure, "oracle returned a non-finite value");
    return v;
  };
  double previous = ask();
  std::vector<double> a(n);
  for (std::size_t k = 0; k < n; ++k) {
    probe[k] = -1.0;
    const double current = ask();
    a[k] = current - previous;
    previous = current;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(a[k] >= -kRecoverySlack)) {
      fail(ErrorCode::kNotMonotoneRecovered,
           "recovered weight " + std::to_string(k + 1) + " is negative: " + std::to_string(a[k]));
    }
    if (k + 1 < n) {
      if (!(a[k] >= a[k + 1] - kRecoverySlack)) {
        fail(ErrorCode::kNotMonotoneRecovered,
             "recovered weights increase at index " + std::to_string(k + 1));
      }
    }
  }
  const double total = compensated_sum(a);
  if (!(std::abs(total - 1.0) <= kRecoverySlack)) {
    fail(ErrorCode::kNotNormalised,
         "recovered weights sum to " + std::to_string(total));
  }
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = std::max(a[k], 0.0);
    if (k > 0) a[k] = std::min(a[k], a[k - 1]);
  }
  const double clamped = compensated_sum(a);
  for (double& v : a) v /= clamped;
  return WeightVector(std::move(a));
}

}  // namespace riskcore

#endif  // RISKCORE_ESTIMATORS_HPP_
