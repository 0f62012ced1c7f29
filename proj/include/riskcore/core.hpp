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

#ifndef RISKCORE_CORE_HPP_
#define RISKCORE_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riskcore/error.hpp"
#include "riskcore/numeric.hpp"

namespace riskcore {

inline constexpr double kSimplexSumTolerance = 1e-12;
inline constexpr double kSimplexEntrySlack = 1e-15;
inline constexpr double kMonotoneSlack = 1e-15;

/// A finite sequence of P&L values (profit positive). Never empty.
class Sample {
 public:
  explicit Sample(std::vector<double> values) : values_(std::move(values)) {
    require(!values_.empty(), ErrorCode::kEmptyInput, "sample must contain at least one value");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(std::isfinite(values_[i]))) {
        fail(ErrorCode::kNonFiniteInput,
             "sample entry " + std::to_string(i) + " is not finite");
      }
    }
  }
  Sample(std::initializer_list<double> values) : Sample(std::vector<double>(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::vector<double> values_;
};

/// Order statistics x_{1:n} <= ... <= x_{n:n} with the permutation that produced them:
/// values()[j] == original[permutation()[j]].
class SortedSample {
 public:
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const std::size_t> permutation() const noexcept { return permutation_; }

 private:
  friend SortedSample sort_sample(const Sample& x);
  SortedSample(std::vector<double> v, std::vector<std::size_t> p)
      : values_(std::move(v)), permutation_(std::move(p)) {}

  std::vector<double> values_;
  std::vector<std::size_t> permutation_;
};

/// Stable ascending sort.
inline SortedSample sort_sample(const Sample& x) {
  std::vector<std::size_t> perm(x.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::vector<double> sorted(x.size());
  for (std::size_t j = 0; j < perm.size(); ++j) sorted[j] = x[perm[j]];
  return SortedSample(std::move(sorted), std::move(perm));
}

/// ceil(n * alpha), snapping products that land within a few ulps of an integer
/// (10 * 0.3 evaluates to 3.0000000000000004).
inline std::size_t ceil_rank(std::size_t n, double alpha) {
  const double prod = static_cast<double>(n) * alpha;
  const double nearest = std::round(prod);
  double k = std::abs(prod - nearest) <= 4.0 * 2.220446049250313e-16 * std::max(1.0, prod)
                 ? nearest
                 : std::ceil(prod);
  k = std::clamp(k, 1.0, static_cast<double>(n));
  return static_cast<std::size_t>(k);
}

/// q_n(alpha) = x_{ceil(n alpha):n}, alpha in (0, 1].
inline double empirical_quantile(const SortedSample& s, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    fail(ErrorCode::kAlphaOutOfRange,
         "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  return s[ceil_rank(s.size(), alpha) - 1];
}

namespace detail {

// Validates simplex membership, clamps entrywise slack to zero and divides by the sum.
inline std::vector<double> normalise_simplex(std::vector<double> w, const char* what) {
  if (!(!w.empty())) {
    fail(ErrorCode::kEmptyInput,
         std::string(what) + " must be non-empty");
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(std::isfinite(w[i]))) {
      fail(ErrorCode::kNonFiniteInput,
           std::string(what) + " entry " + std::to_string(i) + " is not finite");
    }
    if (!(w[i] >= -kSimplexEntrySlack)) {
      fail(ErrorCode::kNotInSimplex,
           std::string(what) + " entry " + std::to_string(i) + " is negative");
    }
    if (w[i] < 0.0) w[i] = 0.0;
  }
  const double total = compensated_sum(w);
  if (!(std::abs(total - 1.0) <= kSimplexSumTolerance)) {
    fail(ErrorCode::kNotInSimplex,
         std::string(what) + " sums to " + std::to_string(total) + ", not 1");
  }
  if (total != 1.0) {
    for (double& v : w) v /= total;
  }
  return w;
}

}  // namespace detail

/// A point of the simplex; certified non-increasing when every step satisfies
/// w[i] >= w[i+1] - 1e-15.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights)
      : weights_(detail::normalise_simplex(std::move(weights), "weight vector")) {
    monotone_ = true;
    for (std::size_t i = 0; i + 1 < weights_.size(); ++i) {
      if (weights_[i] < weights_[i + 1] - kMonotoneSlack) {
        monotone_ = false;
        break;
      }
    }
  }
  WeightVector(std::initializer_list<double> w) : WeightVector(std::vector<double>(w)) {}

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> values() const noexcept { return weights_; }
  bool monotone() const noexcept { return monotone_; }

 private:
  std::vector<double> weights_;
  bool monotone_ = false;
};

/// Mixing masses over discrete-ES levels 1/n, 2/n, ..., 1.
class Mixture {
 public:
  explicit Mixture(std::vector<double> masses)
      : masses_(detail::normalise_simplex(std::move(masses), "mixture")) {}
  Mixture(std::initializer_list<double> m) : Mixture(std::vector<double>(m)) {}

  std::size_t size() const noexcept { return masses_.size(); }
  double operator[](std::size_t i) const { return masses_[i]; }
  std::span<const double> values() const noexcept { return masses_; }

 private:
  std::vector<double> masses_;
};

/// Finite vertex list of a polyhedral dual set. With sorted_domain the weights act on
/// order statistics and every vertex must be non-increasing.
class RepresentingSet {
 public:
  RepresentingSet(std::vector<WeightVector> vertices, bool sorted_domain)
      : vertices_(std::move(vertices)), sorted_domain_(sorted_domain) {
    require(!vertices_.empty(), ErrorCode::kEmptySet, "representing set has no vertices");
    const std::size_t n = vertices_.front().size();
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (!(vertices_[v].size() == n)) {
        fail(ErrorCode::kLengthMismatch,
             "vertex " + std::to_string(v) + " has length " + std::to_string(vertices_[v].size()) + ", expected " + std::to_string(n));
      }
      if (!(!sorted_domain_ || vertices_[v].monotone())) {
        fail(ErrorCode::kNotMonotone,
             "vertex " + std::to_string(v) + " is not non-increasing");
      }
    }
  }

  std::size_t dimension() const noexcept { return vertices_.front().size(); }
  std::size_t size() const noexcept { return vertices_.size(); }
  bool sorted_domain() const noexcept { return sorted_domain_; }
  const WeightVector& operator[](std::size_t i) const { return vertices_[i]; }
  std::span<const WeightVector> vertices() const noexcept { return vertices_; }

 private:
  std::vector<WeightVector> vertices_;
  bool sorted_domain_;
};

/// Finite vertex list of mixtures over the ES levels k/n.
class MixtureSet {
 public:
  explicit MixtureSet(std::vector<Mixture> vertices) : vertices_(std::move(vertices)) {
    require(!vertices_.empty(), ErrorCode::kEmptySet, "mixture set has no vertices");
    const std::size_t n = vertices_.front().size();
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (!(vertices_[v].size() == n)) {
        fail(ErrorCode::kLengthMismatch,
             "mixture vertex " + std::to_string(v) + " has the wrong length");
      }
    }
  }

  std::size_t dimension() const noexcept { return vertices_.front().size(); }
  std::size_t size() const noexcept { return vertices_.size(); }
  const Mixture& operator[](std::size_t i) const { return vertices_[i]; }
  std::span<const Mixture> vertices() const noexcept { return vertices_; }

 private:
  std::vector<Mixture> vertices_;
};

/// a -> mu with mu_k = k (a_k - a_{k+1}), a_{n+1} = 0.
inline Mixture t_map(const WeightVector& a) {
  require(a.monotone(), ErrorCode::kNotMonotone,
          "the ES decomposition needs non-increasing weights");
  const std::size_t n = a.size();
  std::vector<double> mu(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double next = k + 1 < n ? a[k + 1] : 0.0;
    // Certified slack may leave a difference of order -1e-15.
    mu[k] = std::max(0.0, static_cast<double>(k + 1) * (a[k] - next));
  }
  return Mixture(std::move(mu));
}

/// mu -> a with a_i = sum_{k >= i} mu_k / k.
inline WeightVector t_inverse(const Mixture& mu) {
  const std::size_t n = mu.size();
  std::vector<double> a(n);
  CompensatedSum tail;
  for (std::size_t i = n; i-- > 0;) {
    tail.add(mu[i] / static_cast<double>(i + 1));
    a[i] = tail.value();
  }
  for (std::size_t i = n - 1; i-- > 0;) a[i] = std::max(a[i], a[i + 1]);
  return WeightVector(std::move(a));
}

}  // namespace riskcore

#endif  // RISKCORE_CORE_HPP_
