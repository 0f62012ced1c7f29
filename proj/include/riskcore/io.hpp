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

#ifndef RISKCORE_IO_HPP_
#define RISKCORE_IO_HPP_

#include <array>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "riskcore/core.hpp"
#include "riskcore/error.hpp"
#include "riskcore/population.hpp"
#include "riskcore/spectra.hpp"

namespace riskcore {

using Json = nlohmann::json;

inline constexpr std::string_view kSchema = "riskcore/1";

/// Shortest-free, fixed 17-significant-digit rendering; round-trips every double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void dump_into(const Json& j, std::string& out, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += indent < 0 ? "," : ", ";
        dump_into(j[i], out, -1, depth + 1);
      }
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// JSON text with every float at 17 significant digits. Objects keep nlohmann's
/// (sorted) key order, so equal documents serialise to identical bytes.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_into(j, out, indent, 0);
  return out;
}

inline Json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kParseError, std::string(what) + " is not valid JSON: " + e.what());
  }
}

/// Accepts inline JSON, or a path to a file holding it.
inline Json load_json_argument(const std::string& arg, std::string_view what) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    return parse_json_text(arg, what);
  }
  std::ifstream in(arg);
  if (!(in.good())) {
    fail(ErrorCode::kParseError,
         std::string(what) + ": cannot open '" + arg + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), what);
}

namespace detail {

inline void check_schema(const Json& j, std::string_view what) {
  if (j.is_object() && j.contains("schema")) {
    if (!(j["schema"].is_string() && j["schema"].get<std::string>() == kSchema)) {
      fail(ErrorCode::kParseError,
           std::string(what) + " declares an unsupported schema (expected riskcore/1)");
    }
  }
}

inline double number_field(const Json& j, const char* key, std::string_view what) {
  if (!(j.contains(key) && j[key].is_number())) {
    fail(ErrorCode::kParseError,
         std::string(what) + " needs numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

inline std::vector<double> number_array(const Json& j, std::string_view what) {
  if (!(j.is_array())) {
    fail(ErrorCode::kParseError,
         std::string(what) + " must be an array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!(v.is_number())) {
      fail(ErrorCode::kParseError,
           std::string(what) + " must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

inline Spectrum spectrum_from_json(const Json& j) {
  require(j.is_object() && j.contains("type") && j["type"].is_string(), ErrorCode::kParseError,
          "spectrum JSON needs a string 'type'");
  detail::check_schema(j, "spectrum");
  const std::string type = j["type"].get<std::string>();
  if (type == "es") return Spectrum::expected_shortfall(detail::number_field(j, "alpha", "es spectrum"));
  if (type == "uniform") return Spectrum::uniform();
  if (type == "linear") return Spectrum::linear(detail::number_field(j, "slope", "linear spectrum"));
  if (type == "exponential") return Spectrum::exponential(detail::number_field(j, "k", "exponential spectrum"));
  if (type == "piecewise_linear") {
    require(j.contains("knots") && j["knots"].is_array(), ErrorCode::kParseError,
            "piecewise_linear spectrum needs 'knots'");
    std::vector<std::array<double, 2>> knots;
    for (const auto& k : j["knots"]) {
      const auto pair = detail::number_array(k, "knot");
      require(pair.size() == 2, ErrorCode::kParseError, "each knot must be [t, value]");
      knots.push_back({pair[0], pair[1]});
    }
    return Spectrum::piecewise_linear(std::move(knots));
  }
  fail(ErrorCode::kParseError, "unknown spectrum type '" + type + "'");
}

inline Json spectrum_to_json(const Spectrum& s) {
  switch (s.kind()) {
    case SpectrumKind::kExpectedShortfall: return {{"type", "es"}, {"alpha", s.alpha()}};
    case SpectrumKind::kUniform: return {{"type", "uniform"}};
    case SpectrumKind::kLinear: return {{"type", "linear"}, {"slope", s.slope()}};
    case SpectrumKind::kExponential: return {{"type", "exponential"}, {"k", s.rate()}};
    case SpectrumKind::kPiecewiseLinear: {
      Json knots = Json::array();
      for (const auto& k : s.knots()) knots.push_back({k[0], k[1]});
      return {{"type", "piecewise_linear"}, {"knots", knots}};
    }
    case SpectrumKind::kCustom:
      fail(ErrorCode::kNotApplicable, "custom spectra have no JSON form");
  }
  return {};
}

inline ReferenceDistribution distribution_from_json(const Json& j) {
  require(j.is_object() && j.contains("type") && j["type"].is_string(), ErrorCode::kParseError,
          "distribution JSON needs a string 'type'");
  detail::check_schema(j, "distribution");
  const std::string type = j["type"].get<std::string>();
  if (type == "uniform") {
    return ReferenceDistribution::uniform(detail::number_field(j, "a", "uniform"),
                                          detail::number_field(j, "b", "uniform"));
  }
  if (type == "normal") {
    return ReferenceDistribution::normal(detail::number_field(j, "mean", "normal"),
                                         detail::number_field(j, "sd", "normal"));
  }
  if (type == "exponential") {
    return ReferenceDistribution::exponential(detail::number_field(j, "rate", "exponential"));
  }
  if (type == "point_mass") {
    return ReferenceDistribution::point_mass(detail::number_field(j, "c", "point_mass"));
  }
  fail(ErrorCode::kParseError, "unknown distribution type '" + type + "'");
}

inline Json distribution_to_json(const ReferenceDistribution& d) {
  switch (d.kind()) {
    case DistributionKind::kUniform: return {{"type", "uniform"}, {"a", d.param1()}, {"b", d.param2()}};
    case DistributionKind::kNormal: return {{"type", "normal"}, {"mean", d.param1()}, {"sd", d.param2()}};
    case DistributionKind::kExponential: return {{"type", "exponential"}, {"rate", d.param1()}};
    case DistributionKind::kPointMass: return {{"type", "point_mass"}, {"c", d.param1()}};
  }
  return {};
}

/// A bare array, or an object carrying the array under `key`.
inline std::vector<double> vector_from_json(const Json& j, const char* key) {
  if (j.is_array()) return detail::number_array(j, key);
  if (!(j.is_object() && j.contains(key))) {
    fail(ErrorCode::kParseError,
         std::string("expected an array or an object with '") + key + "'");
  }
  detail::check_schema(j, key);
  return detail::number_array(j[key], key);
}

inline RepresentingSet representing_set_from_json(const Json& j) {
  require(j.is_object() && j.contains("vertices") && j["vertices"].is_array(),
          ErrorCode::kParseError, "representing set JSON needs 'vertices'");
  detail::check_schema(j, "representing set");
  bool sorted = false;
  if (j.contains("sorted_domain")) {
    require(j["sorted_domain"].is_boolean(), ErrorCode::kParseError,
            "'sorted_domain' must be a boolean");
    sorted = j["sorted_domain"].get<bool>();
  }
  std::vector<WeightVector> vertices;
  for (const auto& v : j["vertices"]) vertices.emplace_back(detail::number_array(v, "vertex"));
  return RepresentingSet(std::move(vertices), sorted);
}

/// Sample file: one decimal per line; a non-numeric first line is a header;
/// blank lines are skipped.
inline Sample parse_sample(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(b, e - b + 1);
    // strtod rather than stod: underflow to a subnormal is a valid value, and
    // overflow comes back as infinity, which Sample rejects.
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      if (values.empty() && line_no == 1) continue;
      fail(ErrorCode::kParseError, "sample line " + std::to_string(line_no) +
                                       " is not a number: '" + token + "'");
    }
    values.push_back(v);
  }
  return Sample(std::move(values));
}

inline std::string serialise_sample(const Sample& x) {
  std::string out;
  for (double v : x.values()) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

inline Json vector_json(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

}  // namespace riskcore

#endif  // RISKCORE_IO_HPP_
