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

#ifndef RISKCORE_POPULATION_HPP_
#define RISKCORE_POPULATION_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "riskcore/error.hpp"
#include "riskcore/numeric.hpp"
#include "riskcore/spectra.hpp"

namespace riskcore {

inline double standard_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double standard_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Inverse standard normal CDF, Wichura's AS241 (PPND16); relative accuracy ~1e-16.
inline double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    fail(ErrorCode::kDomainError,
         "normal quantile needs p in (0, 1), got " + std::to_string(p));
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return q < 0.0 ? -val : val;
}

enum class DistributionKind { kUniform, kNormal, kExponential, kPointMass };

/// Reference law with exact CDF, quantile, density and the integrated forms used by
/// the population risk values and the Wasserstein distance.
class ReferenceDistribution {
 public:
  static ReferenceDistribution uniform(double a, double b) {
    require(std::isfinite(a) && std::isfinite(b) && a < b, ErrorCode::kInvalidDistribution,
            "uniform distribution needs finite a < b");
    ReferenceDistribution d(DistributionKind::kUniform);
    d.p1_ = a;
    d.p2_ = b;
    return d;
  }
  static ReferenceDistribution normal(double mean, double sd) {
    require(std::isfinite(mean) && std::isfinite(sd) && sd > 0.0,
            ErrorCode::kInvalidDistribution, "normal distribution needs finite mean and sd > 0");
    ReferenceDistribution d(DistributionKind::kNormal);
    d.p1_ = mean;
    d.p2_ = sd;
    return d;
  }
  static ReferenceDistribution exponential(double rate) {
    require(std::isfinite(rate) && rate > 0.0, ErrorCode::kInvalidDistribution,
            "exponential distribution needs rate > 0");
    ReferenceDistribution d(DistributionKind::kExponential);
    d.p1_ = rate;
    return d;
  }
  static ReferenceDistribution point_mass(double c) {
    require(std::isfinite(c), ErrorCode::kInvalidDistribution, "point mass location must be finite");
    ReferenceDistribution d(DistributionKind::kPointMass);
    d.p1_ = c;
    return d;
  }

  DistributionKind kind() const noexcept { return kind_; }
  bool continuous() const noexcept { return kind_ != DistributionKind::kPointMass; }

  // Parameters: uniform (a, b), normal (mean, sd), exponential (rate), point mass (c).
  double param1() const noexcept { return p1_; }
  double param2() const noexcept { return p2_; }

  double mean() const {
    switch (kind_) {
      case DistributionKind::kUniform: return 0.5 * (p1_ + p2_);
      case DistributionKind::kNormal: return p1_;
      case DistributionKind::kExponential: return 1.0 / p1_;
      case DistributionKind::kPointMass: return p1_;
    }
    return 0.0;
  }

  double variance() const {
    switch (kind_) {
      case DistributionKind::kUniform: return (p2_ - p1_) * (p2_ - p1_) / 12.0;
      case DistributionKind::kNormal: return p2_ * p2_;
      case DistributionKind::kExponential: return 1.0 / (p1_ * p1_);
      case DistributionKind::kPointMass: return 0.0;
    }
    return 0.0;
  }

  double cdf(double x) const {
    switch (kind_) {
      case DistributionKind::kUniform: return std::clamp((x - p1_) / (p2_ - p1_), 0.0, 1.0);
      case DistributionKind::kNormal: return standard_normal_cdf((x - p1_) / p2_);
      case DistributionKind::kExponential: return x <= 0.0 ? 0.0 : -std::expm1(-p1_ * x);
      case DistributionKind::kPointMass: return x < p1_ ? 0.0 : 1.0;
    }
    return 0.0;
  }

  /// Lower quantile q(u) for u in (0, 1); bounded laws also accept the endpoints.
  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
      fail(ErrorCode::kDomainError,
           "quantile level must lie in [0, 1], got " + std::to_string(u));
    }
    switch (kind_) {
      case DistributionKind::kUniform: return p1_ + (p2_ - p1_) * u;
      case DistributionKind::kNormal: return p1_ + p2_ * standard_normal_quantile(u);
      case DistributionKind::kExponential:
        require(u < 1.0, ErrorCode::kDomainError, "exponential quantile is unbounded at 1");
        return -std::log1p(-u) / p1_;
      case DistributionKind::kPointMass: return p1_;
    }
    return 0.0;
  }

  double density(double x) const {
    switch (kind_) {
      case DistributionKind::kUniform:
        return (x >= p1_ && x <= p2_) ? 1.0 / (p2_ - p1_) : 0.0;
      case DistributionKind::kNormal: return standard_normal_pdf((x - p1_) / p2_) / p2_;
      case DistributionKind::kExponential: return x < 0.0 ? 0.0 : p1_ * std::exp(-p1_ * x);
      case DistributionKind::kPointMass:
        fail(ErrorCode::kNotApplicable, "a point mass has no density");
    }
    return 0.0;
  }

  /// q'(u) = 1 / f(q(u)) for u in (0, 1).
  double quantile_derivative(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
      fail(ErrorCode::kDomainError,
           "quantile derivative needs u in (0, 1), got " + std::to_string(u));
    }
    switch (kind_) {
      case DistributionKind::kUniform: return p2_ - p1_;
      case DistributionKind::kNormal:
        return p2_ / standard_normal_pdf(standard_normal_quantile(u));
      case DistributionKind::kExponential: return 1.0 / (p1_ * (1.0 - u));
      case DistributionKind::kPointMass:
        fail(ErrorCode::kNotApplicable, "a point mass has no quantile derivative");
    }
    return 0.0;
  }

  /// int_0^t q(u) du for t in [0, 1].
  double quantile_primitive(double t) const {
    require(t >= 0.0 && t <= 1.0, ErrorCode::kDomainError, "level must lie in [0, 1]");
    switch (kind_) {
      case DistributionKind::kUniform: return p1_ * t + 0.5 * (p2_ - p1_) * t * t;
      case DistributionKind::kNormal:
        if (t == 0.0) return 0.0;
        if (t == 1.0) return p1_;
        return p1_ * t - p2_ * standard_normal_pdf(standard_normal_quantile(t));
      case DistributionKind::kExponential:
        if (t == 1.0) return 1.0 / p1_;
        return ((1.0 - t) * std::log1p(-t) + t) / p1_;
      case DistributionKind::kPointMass: return p1_ * t;
    }
    return 0.0;
  }

  /// int_t^1 q(u) du, computed without cancellation for t near 1.
  double upper_quantile_integral(double t) const {
    require(t >= 0.0 && t <= 1.0, ErrorCode::kDomainError, "level must lie in [0, 1]");
    switch (kind_) {
      case DistributionKind::kNormal:
        if (t == 0.0) return p1_;
        if (t == 1.0) return 0.0;
        return p1_ * (1.0 - t) + p2_ * standard_normal_pdf(standard_normal_quantile(t));
      case DistributionKind::kExponential: {
        if (t == 1.0) return 0.0;
        const double s = 1.0 - t;
        return s * (1.0 - std::log(s)) / p1_;
      }
      default:
        return quantile_primitive(1.0) - quantile_primitive(t);
    }
  }

  /// int_{-inf}^x F(y) dy.
  double integrated_cdf(double x) const {
    switch (kind_) {
      case DistributionKind::kUniform: {
        const double w = p2_ - p1_;
        if (x <= p1_) return 0.0;
        if (x <= p2_) return (x - p1_) * (x - p1_) / (2.0 * w);
        return 0.5 * w + (x - p2_);
      }
      case DistributionKind::kNormal: {
        const double z = (x - p1_) / p2_;
        return p2_ * (z * standard_normal_cdf(z) + standard_normal_pdf(z));
      }
      case DistributionKind::kExponential:
        return x <= 0.0 ? 0.0 : x + std::expm1(-p1_ * x) / p1_;
      case DistributionKind::kPointMass: return x <= p1_ ? 0.0 : x - p1_;
    }
    return 0.0;
  }

  /// int_x^inf (1 - F(y)) dy.
  double integrated_survival(double x) const {
    switch (kind_) {
      case DistributionKind::kUniform: {
        const double w = p2_ - p1_;
        if (x >= p2_) return 0.0;
        if (x >= p1_) return (p2_ - x) * (p2_ - x) / (2.0 * w);
        return (p1_ - x) + 0.5 * w;
      }
      case DistributionKind::kNormal: {
        const double z = (x - p1_) / p2_;
        return p2_ * (standard_normal_pdf(z) - z * standard_normal_cdf(-z));
      }
      case DistributionKind::kExponential:
        return x >= 0.0 ? std::exp(-p1_ * x) / p1_ : -x + 1.0 / p1_;
      case DistributionKind::kPointMass: return x >= p1_ ? 0.0 : p1_ - x;
    }
    return 0.0;
  }

 private:
  explicit ReferenceDistribution(DistributionKind kind) : kind_(kind) {}

  DistributionKind kind_;
  double p1_ = 0.0;
  double p2_ = 0.0;
};

/// ES_alpha(X) = -(1/alpha) int_0^alpha q, in closed form for every bundled law.
inline double population_es(const ReferenceDistribution& dist, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    fail(ErrorCode::kAlphaOutOfRange,
         "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  if (dist.kind() == DistributionKind::kPointMass) return -dist.mean();
  return -dist.quantile_primitive(alpha) / alpha;
}

inline constexpr double kPopulationTailCut = 1e-8;

/// rho_phi(X) = -int_0^1 q phi. Adaptive Simpson (absolute tolerance 1e-10) on
/// [delta, 1 - delta], delta = 1e-8, split at the spectrum breakpoints; the two tails
/// use the exact quantile integrals with phi frozen at the tail.
inline double population_spectral_risk(const ReferenceDistribution& dist, const Spectrum& phi) {
  if (dist.kind() == DistributionKind::kPointMass) return -dist.mean();
  const double delta = kPopulationTailCut;
  std::vector<double> cuts{delta};
  for (double b : phi.breakpoints()) {
    if (b > delta && b < 1.0 - delta) cuts.push_back(b);
  }
  cuts.push_back(1.0 - delta);
  QuadratureOptions opt;
  opt.abs_tol = 1e-10;
  CompensatedSum total;
  total.add(-adaptive_simpson_split(
      [&](double u) { return dist.quantile(u) * phi.density_unchecked(u); }, cuts, opt));
  total.add(-phi.density_unchecked(0.5 * delta) * dist.quantile_primitive(delta));
  total.add(-phi.density_unchecked(1.0 - 0.5 * delta) * dist.upper_quantile_integral(1.0 - delta));
  return total.value();
}

}  // namespace riskcore

#endif  // RISKCORE_POPULATION_HPP_
