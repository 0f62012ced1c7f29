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

#ifndef RISKCORE_TESTS_TEST_UTIL_HPP_
#define RISKCORE_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

// Hand-rolled generators for property tests. They use the standard library
// engine on purpose so they share nothing with the code under test.
namespace riskcore::testing {

using Engine = std::mt19937_64;

/// Random point of the simplex; with probability 1/4 most entries are zeroed.
inline std::vector<double> random_simplex(Engine& g, std::size_t n) {
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool sparse = unit(g) < 0.25;
  std::vector<double> w(n);
  for (double& v : w) v = (sparse && unit(g) < 0.8) ? 0.0 : expo(g);
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) w[0] = 1.0;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return w;
}

/// Random non-increasing point of the simplex.
inline std::vector<double> random_monotone_simplex(Engine& g, std::size_t n) {
  auto w = random_simplex(g, n);
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

/// Random sample with heterogeneous scale and occasional ties.
inline std::vector<double> random_sample(Engine& g, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::exp(8.0 * unit(g) - 4.0);
  const bool ties = unit(g) < 0.2;
  std::vector<double> x(n);
  for (double& v : x) {
    v = scale * normal(g);
    if (ties) v = std::round(v);
  }
  return x;
}

inline double sup_norm(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace riskcore::testing

#endif  // RISKCORE_TESTS_TEST_UTIL_HPP_
