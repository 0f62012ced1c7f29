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

#ifndef RISKCORE_SPECTRA_HPP_
#define RISKCORE_SPECTRA_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riskcore/core.hpp"
#include "riskcore/error.hpp"
#include "riskcore/numeric.hpp"

namespace riskcore {

enum class SpectrumKind {
  kExpectedShortfall,
  kUniform,
  kLinear,
  kExponential,
  kPiecewiseLinear,
  kCustom,
};

inline constexpr std::size_t kSpectrumCheckGrid = 10'000;

/// A bounded non-increasing density on [0, 1] with unit mass.
///
/// Every built-in kind carries its closed-form primitive; custom densities are
/// integrated by adaptive Simpson at absolute tolerance 1e-10 and rescaled to unit
/// mass on construction. Construction validates monotonicity and the bound C on a
/// 10^4-point grid (plus knots/breakpoints) and fails with InvalidSpectrum.
class Spectrum {
 public:
  /// phi = 1/alpha on (0, alpha], zero afterwards. Not Lipschitz.
  static Spectrum expected_shortfall(double alpha) {
    require(alpha > 0.0 && alpha <= 1.0, ErrorCode::kInvalidSpectrum,
            "expected shortfall level must lie in (0, 1]");
    Spectrum s(SpectrumKind::kExpectedShortfall);
    s.alpha_ = alpha;
    s.bound_ = 1.0 / alpha;
    if (alpha < 1.0) {
      s.breakpoints_ = {0.0, alpha, 1.0};
    } else {
      s.lipschitz_ = 0.0;
    }
    s.validate();
    return s;
  }

  static Spectrum uniform() {
    Spectrum s(SpectrumKind::kUniform);
    s.bound_ = 1.0;
    s.lipschitz_ = 0.0;
    s.validate();
    return s;
  }

  /// phi(u) = 1 + slope (1/2 - u); slope in [0, 2]. slope = 2 gives 2(1 - u).
  static Spectrum linear(double slope) {
    require(slope >= 0.0 && slope <= 2.0, ErrorCode::kInvalidSpectrum,
            "linear spectrum slope must lie in [0, 2] to stay non-negative");
    Spectrum s(SpectrumKind::kLinear);
    s.slope_ = slope;
    s.bound_ = 1.0 + 0.5 * slope;
    s.lipschitz_ = slope;
    s.validate();
    return s;
  }

  /// phi(u) = k exp(-k u) / (1 - exp(-k)), k > 0.
  static Spectrum exponential(double k) {
    require(k > 0.0 && std::isfinite(k), ErrorCode::kInvalidSpectrum,
            "exponential spectrum rate must be positive");
    Spectrum s(SpectrumKind::kExponential);
    s.rate_ = k;
    s.bound_ = k / -std::expm1(-k);
    s.lipschitz_ = k * s.bound_;
    s.validate();
    return s;
  }

  /// Linear interpolation through (t_j, v_j) with t_0 = 0 < ... < t_m = 1 and
  /// non-increasing v_j >= 0. Knot values are rescaled by their exact trapezoidal
  /// mass, which must already be within 1e-6 of one.
  static Spectrum piecewise_linear(std::vector<std::array<double, 2>> knots) {
    require(knots.size() >= 2, ErrorCode::kInvalidSpectrum,
            "piecewise-linear spectrum needs at least two knots");
    require(knots.front()[0] == 0.0 && knots.back()[0] == 1.0, ErrorCode::kInvalidSpectrum,
            "piecewise-linear knots must start at t=0 and end at t=1");
    double mass = 0.0;
    for (std::size_t j = 0; j < knots.size(); ++j) {
      if (!(std::isfinite(knots[j][0]) && std::isfinite(knots[j][1]))) {
        fail(ErrorCode::kInvalidSpectrum,
             "knot " + std::to_string(j) + " is not finite");
      }
      if (!(knots[j][1] >= 0.0)) {
        fail(ErrorCode::kInvalidSpectrum,
             "knot " + std::to_string(j) + " has a negative value");
      }
      if (j > 0) {
        require(knots[j][0] > knots[j - 1][0], ErrorCode::kInvalidSpectrum,
                "knot abscissae must be strictly increasing");
        if (!(knots[j][1] <= knots[j - 1][1])) {
          fail(ErrorCode::kInvalidSpectrum,
               "knot values must be non-increasing (knot " + std::to_string(j) + ")");
        }
        mass += 0.5 * (knots[j][1] + knots[j - 1][1]) * (knots[j][0] - knots[j - 1][0]);
      }
    }
    if (!(std::abs(mass - 1.0) <= 1e-6)) {
      fail(ErrorCode::kInvalidSpectrum,
           "piecewise-linear spectrum integrates to " + std::to_string(mass) + ", not 1");
    }
    Spectrum s(SpectrumKind::kPiecewiseLinear);
    double lip = 0.0;
    s.knot_t_.reserve(knots.size());
    s.knot_v_.reserve(knots.size());
    for (const auto& k : knots) {
      s.knot_t_.push_back(k[0]);
      s.knot_v_.push_back(k[1] / mass);
    }
    s.knot_cum_.assign(knots.size(), 0.0);
    for (std::size_t j = 1; j < knots.size(); ++j) {
      const double dt = s.knot_t_[j] - s.knot_t_[j - 1];
      s.knot_cum_[j] = s.knot_cum_[j - 1] + 0.5 * (s.knot_v_[j] + s.knot_v_[j - 1]) * dt;
      lip = std::max(lip, (s.knot_v_[j - 1] - s.knot_v_[j]) / dt);
    }
    s.bound_ = s.knot_v_.front();
    s.lipschitz_ = lip;
    s.breakpoints_ = s.knot_t_;
    s.validate();
    return s;
  }

  /// Arbitrary density with declared sup bound and optional Lipschitz constant.
  /// `breakpoints` lists interior points where phi may jump or kink.
  static Spectrum custom(std::function<double(double)> density, double bound,
                         std::optional<double> lipschitz = std::nullopt,
                         std::vector<double> breakpoints = {}) {
    require(static_cast<bool>(density), ErrorCode::kInvalidSpectrum, "empty density");
    Spectrum s(SpectrumKind::kCustom);
    s.density_ = std::move(density);
    s.bound_ = bound;
    s.lipschitz_ = lipschitz;
    breakpoints.push_back(0.0);
    breakpoints.push_back(1.0);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    require(breakpoints.front() >= 0.0 && breakpoints.back() <= 1.0,
            ErrorCode::kInvalidSpectrum, "breakpoints must lie in [0, 1]");
    s.breakpoints_ = std::move(breakpoints);
    const double mass = s.quadrature_primitive(1.0);
    if (!(std::abs(mass - 1.0) <= 1e-6)) {
      fail(ErrorCode::kInvalidSpectrum,
           "custom density integrates to " + std::to_string(mass) + ", not 1");
    }
    s.custom_scale_ = 1.0 / mass;
    s.validate();
    return s;
  }

  SpectrumKind kind() const noexcept { return kind_; }
  double bound() const noexcept { return bound_; }
  std::optional<double> lipschitz() const noexcept { return lipschitz_; }
  bool is_lipschitz() const noexcept { return lipschitz_.has_value(); }
  bool has_closed_primitive() const noexcept { return kind_ != SpectrumKind::kCustom; }

  double alpha() const noexcept { return alpha_; }
  double slope() const noexcept { return slope_; }
  double rate() const noexcept { return rate_; }
  std::vector<std::array<double, 2>> knots() const {
    std::vector<std::array<double, 2>> out;
    for (std::size_t j = 0; j < knot_t_.size(); ++j) out.push_back({knot_t_[j], knot_v_[j]});
    return out;
  }

  /// Points in [0, 1] where phi may jump or kink, including both endpoints.
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

  /// phi(u) for u in (0, 1].
  double operator()(double u) const {
    if (!(u > 0.0 && u <= 1.0)) {
      fail(ErrorCode::kDomainError,
           "spectrum argument must lie in (0, 1], got " + std::to_string(u));
    }
    return density_unchecked(u);
  }

  /// Phi(t) = int_0^t phi for t in [0, 1].
  double primitive(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) {
      fail(ErrorCode::kDomainError,
           "primitive argument must lie in [0, 1], got " + std::to_string(t));
    }
    switch (kind_) {
      case SpectrumKind::kExpectedShortfall:
        return std::min(t, alpha_) / alpha_;
      case SpectrumKind::kUniform:
        return t;
      case SpectrumKind::kLinear:
        return t + 0.5 * slope_ * t * (1.0 - t);
      case SpectrumKind::kExponential:
        return std::expm1(-rate_ * t) / std::expm1(-rate_);
      case SpectrumKind::kPiecewiseLinear: {
        if (t >= 1.0) return knot_cum_.back();
        const std::size_t j = segment(t);
        const double dt = t - knot_t_[j];
        const double v0 = knot_v_[j];
        const double v1 = knot_v_[j + 1];
        const double slope = (v1 - v0) / (knot_t_[j + 1] - knot_t_[j]);
        return knot_cum_[j] + v0 * dt + 0.5 * slope * dt * dt;
      }
      case SpectrumKind::kCustom:
        return custom_scale_ * quadrature_primitive(t);
    }
    return 0.0;
  }

  /// phi without the domain check; u = 0 evaluates the right limit.
  double density_unchecked(double u) const {
    switch (kind_) {
      case SpectrumKind::kExpectedShortfall:
        return u <= alpha_ ? 1.0 / alpha_ : 0.0;
      case SpectrumKind::kUniform:
        return 1.0;
      case SpectrumKind::kLinear:
        return 1.0 + slope_ * (0.5 - u);
      case SpectrumKind::kExponential:
        return rate_ * std::exp(-rate_ * u) / -std::expm1(-rate_);
      case SpectrumKind::kPiecewiseLinear: {
        if (u >= 1.0) return knot_v_.back();
        const std::size_t j = segment(u);
        const double w = (u - knot_t_[j]) / (knot_t_[j + 1] - knot_t_[j]);
        return knot_v_[j] + w * (knot_v_[j + 1] - knot_v_[j]);
      }
      case SpectrumKind::kCustom:
        return custom_scale_ * density_(u);
    }
    return 0.0;
  }

 private:
  explicit Spectrum(SpectrumKind kind) : kind_(kind) {}

  std::size_t segment(double t) const {
    const auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
    const auto j = static_cast<std::size_t>(std::distance(knot_t_.begin(), it));
    return std::min(j == 0 ? 0 : j - 1, knot_t_.size() - 2);
  }

  double quadrature_primitive(double t) const {
    std::vector<double> cuts;
    for (double b : breakpoints_) {
      if (b < t) cuts.push_back(b);
    }
    cuts.push_back(t);
    QuadratureOptions opt;
    opt.abs_tol = 1e-10;
    // Endpoint 0 is evaluated as the right limit.
    return adaptive_simpson_split([this](double u) { return density_(std::max(u, 1e-300)); },
                                  cuts, opt);
  }

  void validate() const {
    require(std::isfinite(bound_) && bound_ > 0.0, ErrorCode::kInvalidSpectrum,
            "spectrum bound must be positive and finite");
    std::vector<double> grid;
    grid.reserve(kSpectrumCheckGrid + breakpoints_.size());
    for (std::size_t j = 1; j <= kSpectrumCheckGrid; ++j) {
      grid.push_back(static_cast<double>(j) / static_cast<double>(kSpectrumCheckGrid));
    }
    for (double b : breakpoints_) {
      if (b > 0.0) grid.push_back(b);
    }
    std::sort(grid.begin(), grid.end());
    double prev = density_unchecked(grid.front());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double v = density_unchecked(grid[j]);
      require(std::isfinite(v), ErrorCode::kInvalidSpectrum, "density is not finite");
      if (!(v >= -1e-12 && v <= bound_ + 1e-12)) {
        fail(ErrorCode::kInvalidSpectrum,
             "density leaves [0, C] at t=" + std::to_string(grid[j]));
      }
      if (!(v <= prev + 1e-12)) {
        fail(ErrorCode::kInvalidSpectrum,
             "density increases at t=" + std::to_string(grid[j]));
      }
      prev = v;
    }
    const double total = primitive(1.0);
    const double tol = kind_ == SpectrumKind::kCustom ? 1e-9 : 1e-12;
    if (!(std::abs(total - 1.0) <= tol)) {
      fail(ErrorCode::kInvalidSpectrum,
           "spectrum mass is " + std::to_string(total) + ", not 1");
    }
  }

  SpectrumKind kind_;
  double bound_ = 1.0;
  std::optional<double> lipschitz_;
  double alpha_ = 1.0;
  double slope_ = 0.0;
  double rate_ = 1.0;
  std::vector<double> knot_t_, knot_v_, knot_cum_;
  std::function<double(double)> density_;
  double custom_scale_ = 1.0;
  std::vector<double> breakpoints_{0.0, 1.0};
};

/// a_{i,n} = int_{(i-1)/n}^{i/n} phi, certified non-increasing.
inline WeightVector canonical_weights(const Spectrum& phi, std::size_t n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "n must be positive");
  std::vector<double> a(n);
  const double dn = static_cast<double>(n);
  switch (phi.kind()) {
    case SpectrumKind::kExpectedShortfall: {
      // Cell overlap with (0, alpha], measured in units of 1/n.
      double units = dn * phi.alpha();
      const double nearest = std::round(units);
      if (std::abs(units - nearest) <= 4.0 * 2.220446049250313e-16 * units) units = nearest;
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = std::clamp(units - static_cast<double>(i), 0.0, 1.0) / units;
      }
      break;
    }
    case SpectrumKind::kCustom: {
      QuadratureOptions opt;
      opt.abs_tol = 1e-13;
      opt.initial_panels = 4;
      std::vector<double> cuts;
      for (std::size_t i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) / dn;
        const double hi = static_cast<double>(i + 1) / dn;
        cuts.assign(1, lo);
        for (double b : phi.breakpoints()) {
          if (b > lo && b < hi) cuts.push_back(b);
        }
        cuts.push_back(hi);
        a[i] = adaptive_simpson_split(
            [&phi](double u) { return phi.density_unchecked(std::max(u, 1e-300)); }, cuts, opt);
      }
      const double total = compensated_sum(a);
      for (double& v : a) v /= total;
      for (std::size_t i = 1; i < n; ++i) a[i] = std::min(a[i], a[i - 1]);
      break;
    }
    // Cell masses without differencing primitives: Phi(i/n) - Phi((i-1)/n) loses
    // about n ulps once scaled to step levels.
    case SpectrumKind::kUniform:
      std::fill(a.begin(), a.end(), 1.0 / dn);
      break;
    case SpectrumKind::kLinear:
      // The midpoint rule is exact for affine densities.
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = phi.density_unchecked((static_cast<double>(i) + 0.5) / dn) / dn;
      }
      break;
    case SpectrumKind::kExponential: {
      const double k = phi.rate();
      const double cell = std::expm1(-k / dn) / std::expm1(-k);
      for (std::size_t i = 0; i < n; ++i) a[i] = std::exp(-k * static_cast<double>(i) / dn) * cell;
      break;
    }
    default: {
      double prev = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double next = i + 1 == n ? 1.0 : phi.primitive(static_cast<double>(i + 1) / dn);
        a[i] = next - prev;
        prev = next;
      }
      break;
    }
  }
  WeightVector w(std::move(a));
  require(w.monotone(), ErrorCode::kNotMonotone, "canonical weights lost monotonicity");
  return w;
}

/// phi_n = sum_i n a_i 1_{((i-1)/n, i/n]}.
class StepSpectrum {
 public:
  explicit StepSpectrum(const WeightVector& a) {
    require(a.monotone(), ErrorCode::kNotMonotone, "step spectrum needs non-increasing weights");
    const std::size_t n = a.size();
    const double dn = static_cast<double>(n);
    levels_.resize(n);
    cumulative_.assign(n + 1, 0.0);
    CompensatedSum run;
    for (std::size_t i = 0; i < n; ++i) {
      levels_[i] = dn * a[i];
      run.add(a[i]);
      cumulative_[i + 1] = run.value();
    }
  }

  std::size_t size() const noexcept { return levels_.size(); }
  std::span<const double> levels() const noexcept { return levels_; }

  /// phi_n(t), t in (0, 1].
  double operator()(double t) const {
    require(t > 0.0 && t <= 1.0, ErrorCode::kDomainError, "step spectrum argument outside (0, 1]");
    return levels_[ceil_rank(levels_.size(), t) - 1];
  }

  /// int_0^t phi_n for t in [0, 1].
  double primitive(double t) const {
    require(t >= 0.0 && t <= 1.0, ErrorCode::kDomainError, "primitive argument outside [0, 1]");
    const double dn = static_cast<double>(levels_.size());
    const double scaled = t * dn;
    auto full = static_cast<std::size_t>(std::floor(scaled));
    if (full >= levels_.size()) return cumulative_.back();
    const double frac = scaled - static_cast<double>(full);
    return cumulative_[full] + frac * levels_[full] / dn;
  }

 private:
  std::vector<double> levels_;
  std::vector<double> cumulative_;
};

inline StepSpectrum step_spectrum(const WeightVector& a) { return StepSpectrum(a); }

/// max_{j=0..grid} |Phi_n(j/grid) - Phi(j/grid)| for the canonical step spectrum.
inline double primitive_gap(const Spectrum& phi, std::size_t n, std::size_t grid_size) {
  require(grid_size >= 2, ErrorCode::kInvalidArgument, "grid_size must be at least 2");
  const StepSpectrum step(canonical_weights(phi, n));
  double gap = 0.0;
  for (std::size_t j = 0; j <= grid_size; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(grid_size);
    gap = std::max(gap, std::abs(step.primitive(t) - phi.primitive(t)));
  }
  return gap;
}

}  // namespace riskcore

#endif  // RISKCORE_SPECTRA_HPP_
