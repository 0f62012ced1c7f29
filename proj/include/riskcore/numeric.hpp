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

#ifndef RISKCORE_NUMERIC_HPP_
#define RISKCORE_NUMERIC_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskcore/error.hpp"

namespace riskcore {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_evaluations = 1'000'000;
  int max_depth = 60;
  int initial_panels = 16;
};

/// Adaptive Simpson quadrature of f over [a, b].
///
/// The interval is first cut into `initial_panels` panels; the global tolerance
/// max(abs_tol, rel_tol * |coarse estimate|) is spread over the panels and then
/// halved with every bisection. Panels that reach `max_depth` are accepted as
/// they stand. Exceeding `max_evaluations` raises QuadratureFailure.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, opt);

  struct Panel {
    double a, m, b, fa, fm, fb, whole, eps;
    int depth;
  };

  std::size_t evals = 0;
  auto eval = [&](double x) {
    ++evals;
    const double y = f(x);
    if (!std::isfinite(y)) {
      fail(ErrorCode::kQuadratureFailure,
           "non-finite integrand at x=" + std::to_string(x));
    }
    return y;
  };

  const int panels = opt.initial_panels < 1 ? 1 : opt.initial_panels;
  const double h = (b - a) / panels;
  std::vector<Panel> stack;
  stack.reserve(static_cast<std::size_t>(panels) + 2 * static_cast<std::size_t>(opt.max_depth));

  std::vector<double> xs(2 * static_cast<std::size_t>(panels) + 1);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = (i + 1 == xs.size()) ? b : a + 0.5 * h * static_cast<double>(i);
    ys[i] = eval(xs[i]);
  }
  double coarse = 0.0;
  for (int p = 0; p < panels; ++p) {
    const std::size_t i = 2 * static_cast<std::size_t>(p);
    coarse += (xs[i + 2] - xs[i]) / 6.0 * (ys[i] + 4.0 * ys[i + 1] + ys[i + 2]);
  }
  const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse));
  for (int p = panels - 1; p >= 0; --p) {
    const std::size_t i = 2 * static_cast<std::size_t>(p);
    const double whole = (xs[i + 2] - xs[i]) / 6.0 * (ys[i] + 4.0 * ys[i + 1] + ys[i + 2]);
    stack.push_back({xs[i], xs[i + 1], xs[i + 2], ys[i], ys[i + 1], ys[i + 2], whole,
                     tol / panels, 0});
  }

  CompensatedSum total;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (p.depth >= opt.max_depth || std::abs(delta) <= 15.0 * p.eps ||
        !(lm > p.a && rm < p.b)) {
      total.add(left + right + delta / 15.0);
      continue;
    }
    if (evals > opt.max_evaluations) {
      fail(ErrorCode::kQuadratureFailure,
           "tolerance " + std::to_string(tol) + " not reached within " +
               std::to_string(opt.max_evaluations) + " evaluations");
    }
    stack.push_back({p.m, rm, p.b, p.fm, frm, p.fb, right, 0.5 * p.eps, p.depth + 1});
    stack.push_back({p.a, lm, p.m, p.fa, flm, p.fm, left, 0.5 * p.eps, p.depth + 1});
  }
  return total.value();
}

/// Integrates over consecutive breakpoints so no panel straddles a kink or jump.
template <typename F>
double adaptive_simpson_split(F&& f, std::span<const double> breakpoints,
                              const QuadratureOptions& opt = {}) {
  CompensatedSum total;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] > breakpoints[i]) {
      total.add(adaptive_simpson(f, breakpoints[i], breakpoints[i + 1], opt));
    }
  }
  return total.value();
}

/// Ordinary least-squares slope of y against x.
inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::kInvalidArgument,
          "least squares needs at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  require(sxx > 0.0, ErrorCode::kInvalidArgument, "least squares needs distinct abscissae");
  return sxy / sxx;
}

}  // namespace riskcore

#endif  // RISKCORE_NUMERIC_HPP_
