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

#ifndef RISKCORE_CLI_HPP_
#define RISKCORE_CLI_HPP_

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riskcore/riskcore.hpp"
#include "riskcore/oracle_process.hpp"

namespace riskcore::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailedCheck = 1;
inline constexpr int kExitInputError = 2;

namespace detail {

inline Sample read_sample(const std::string& path, std::istream& stdin_stream) {
  if (path == "-") return parse_sample(stdin_stream);
  std::ifstream in(path);
  if (!(in.good())) {
    fail(ErrorCode::kParseError,
         "cannot open sample file '" + path + "'");
  }
  return parse_sample(in);
}

inline Json with_schema(Json j) {
  j["schema"] = kSchema;
  return j;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"riskcore: finite-sample coherent risk estimation", "riskcore"};
  app.require_subcommand(1);

  std::string sample_path, spectrum_arg, weights_arg, mixture_arg, repset_arg, dist_arg,
      config_arg, oracle_cmd, mixtures_arg, es_values_arg;
  std::size_t n = 0, k = 0, trials = 0, m = 100;
  double alpha = 0.0, point = 0.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool timing = false, law = false, comonotonic = false;

  auto* estimate = app.add_subcommand("estimate", "risk estimates of a sample");
  estimate->add_option("--sample", sample_path, "sample file ('-' for stdin)")->required();
  estimate->add_option("--spectrum", spectrum_arg, "spectrum JSON (canonical plug-in)");
  estimate->add_option("--weights", weights_arg, "sorted-domain weight vector JSON");
  estimate->add_option("--mixture", mixture_arg, "mixture over discrete ES levels JSON");
  estimate->add_option("--repset", repset_arg, "representing set JSON");

  auto* weights = app.add_subcommand("weights", "canonical weights of a spectrum");
  weights->add_option("--spectrum", spectrum_arg)->required();
  weights->add_option("--n", n)->required()->check(CLI::PositiveNumber);

  auto* decompose = app.add_subcommand("decompose", "weights -> discrete-ES mixture");
  decompose->add_option("--weights", weights_arg)->required();

  auto* compose = app.add_subcommand("compose", "discrete-ES mixture -> weights");
  compose->add_option("--mixture", mixture_arg)->required();

  auto* recover = app.add_subcommand("recover", "recover weights of a comonotonic oracle");
  recover->add_option("--oracle", oracle_cmd, "oracle command (line protocol)")->required();
  recover->add_option("--n", n)->required()->check(CLI::PositiveNumber);

  auto* es = app.add_subcommand("es", "discrete expected shortfall dES_{k/n}");
  es->add_option("--sample", sample_path)->required();
  es->add_option("--k", k)->required();

  auto* quantile = app.add_subcommand("quantile", "empirical quantile x_{ceil(n alpha):n}");
  quantile->add_option("--sample", sample_path)->required();
  quantile->add_option("--alpha", alpha)->required();

  auto* kusuoka = app.add_subcommand("kusuoka", "Kusuoka plug-in over mixture vertices");
  kusuoka->add_option("--sample", sample_path, "sample (default ES values are dES_{i/n})");
  kusuoka->add_option("--mixtures", mixtures_arg, "{\"vertices\": [[...], ...]}")->required();
  kusuoka->add_option("--es-values", es_values_arg, "explicit per-level ES values JSON");

  auto* variance = app.add_subcommand("variance", "asymptotic variance sigma^2_phi");
  variance->add_option("--spectrum", spectrum_arg)->required();
  variance->add_option("--dist", dist_arg)->required();

  auto* population = app.add_subcommand("population", "population ES or spectral risk");
  population->add_option("--dist", dist_arg)->required();
  auto* pop_spec = population->add_option("--spectrum", spectrum_arg);
  auto* pop_alpha = population->add_option("--alpha", alpha);
  pop_spec->excludes(pop_alpha);

  auto* influence = app.add_subcommand("influence", "influence function IF_phi(x)");
  influence->add_option("--spectrum", spectrum_arg)->required();
  influence->add_option("--dist", dist_arg)->required();
  influence->add_option("--x", point)->required();

  auto* distance = app.add_subcommand("distance", "Kolmogorov, truncated Kolmogorov and W1");
  distance->add_option("--sample", sample_path)->required();
  distance->add_option("--dist", dist_arg)->required();
  distance->add_option("--m", m)->check(CLI::PositiveNumber);

  std::vector<CLI::App*> experiments;
  for (const char* name : {"clt", "bootstrap", "consistency", "rate"}) {
    auto* sub = app.add_subcommand(name, std::string(name) + " experiment report");
    sub->add_option("--config", config_arg, "experiment config JSON")->required();
    sub->add_option("--seed", seed)->required();
    sub->add_option("--threads", threads, "worker cap; results do not depend on it");
    sub->add_flag("--timing", timing, "print wall time to stderr");
    experiments.push_back(sub);
  }

  auto* axioms = app.add_subcommand("axioms", "randomised coherence-axiom check of an oracle");
  axioms->add_option("--oracle", oracle_cmd)->required();
  axioms->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  axioms->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
  axioms->add_option("--seed", seed)->required();
  axioms->add_flag("--law-invariance", law, "also test law invariance");
  axioms->add_flag("--comonotonic", comonotonic, "also test comonotonic additivity");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (estimate->parsed()) {
      require(!spectrum_arg.empty() || !weights_arg.empty() || !mixture_arg.empty() ||
                  !repset_arg.empty(),
              ErrorCode::kInvalidArgument,
              "estimate needs one of --spectrum, --weights, --mixture, --repset");
      const Sample x = detail::read_sample(sample_path, in);
      Json result = {{"n", x.size()}};
      if (!spectrum_arg.empty()) {
        result["spectral"] =
            spectral_estimate(spectrum_from_json(load_json_argument(spectrum_arg, "--spectrum")), x);
      }
      if (!weights_arg.empty()) {
        const WeightVector a(vector_from_json(load_json_argument(weights_arg, "--weights"), "weights"));
        result["weights"] = l_estimate(a, x, true);
      }
      if (!mixture_arg.empty()) {
        const Mixture mu(vector_from_json(load_json_argument(mixture_arg, "--mixture"), "mixture"));
        result["mixture"] = mixture_estimate(mu, x);
      }
      if (!repset_arg.empty()) {
        const auto sup = robust_sup(
            representing_set_from_json(load_json_argument(repset_arg, "--repset")), x);
        result["repset"] = {{"value", sup.value}, {"argmax", sup.argmax_index}};
      }
      out << dump_json(detail::with_schema(result)) << "\n";
      return kExitOk;
    }
    if (weights->parsed()) {
      const auto a = canonical_weights(
          spectrum_from_json(load_json_argument(spectrum_arg, "--spectrum")), n);
      out << dump_json(detail::with_schema({{"n", n}, {"weights", vector_json(a.values())}}))
          << "\n";
      return kExitOk;
    }
    if (decompose->parsed()) {
      const WeightVector a(vector_from_json(load_json_argument(weights_arg, "--weights"), "weights"));
      out << dump_json(detail::with_schema({{"mixture", vector_json(t_map(a).values())}})) << "\n";
      return kExitOk;
    }
    if (compose->parsed()) {
      const Mixture mu(vector_from_json(load_json_argument(mixture_arg, "--mixture"), "mixture"));
      out << dump_json(detail::with_schema({{"weights", vector_json(t_inverse(mu).values())}}))
          << "\n";
      return kExitOk;
    }
    if (recover->parsed()) {
      OracleProcess oracle(oracle_cmd);
      const auto a = recover_comonotonic_weights(
          [&oracle](std::span<const double> x) { return oracle(x); }, n);
      out << dump_json(detail::with_schema({{"n", n}, {"weights", vector_json(a.values())}}))
          << "\n";
      return kExitOk;
    }
    if (es->parsed()) {
      out << format_double(discrete_es(detail::read_sample(sample_path, in), k)) << "\n";
      return kExitOk;
    }
    if (quantile->parsed()) {
      out << format_double(
                 empirical_quantile(sort_sample(detail::read_sample(sample_path, in)), alpha))
          << "\n";
      return kExitOk;
    }
    if (kusuoka->parsed()) {
      const Json spec = load_json_argument(mixtures_arg, "--mixtures");
      require(spec.is_object() && spec.contains("vertices") && spec["vertices"].is_array(),
              ErrorCode::kParseError, "--mixtures needs 'vertices'");
      std::vector<Mixture> vertices;
      for (const auto& v : spec["vertices"]) vertices.emplace_back(vector_from_json(v, "vertex"));
      const MixtureSet set(std::move(vertices));
      std::vector<double> values;
      if (!es_values_arg.empty()) {
        values = vector_from_json(load_json_argument(es_values_arg, "--es-values"), "es_values");
      } else {
        require(!sample_path.empty(), ErrorCode::kInvalidArgument,
                "kusuoka needs --sample or --es-values");
        values = discrete_es_levels(detail::read_sample(sample_path, in));
      }
      const auto sup = kusuoka_plugin(set, values);
      out << dump_json(detail::with_schema({{"value", sup.value}, {"argmax", sup.argmax_index}}))
          << "\n";
      return kExitOk;
    }
    if (variance->parsed()) {
      out << format_double(asymptotic_variance(
                 spectrum_from_json(load_json_argument(spectrum_arg, "--spectrum")),
                 distribution_from_json(load_json_argument(dist_arg, "--dist"))))
          << "\n";
      return kExitOk;
    }
    if (population->parsed()) {
      const auto dist = distribution_from_json(load_json_argument(dist_arg, "--dist"));
      require(!spectrum_arg.empty() || pop_alpha->count() > 0, ErrorCode::kInvalidArgument,
              "population needs --spectrum or --alpha");
      const double v = spectrum_arg.empty()
                           ? population_es(dist, alpha)
                           : population_spectral_risk(
                                 dist, spectrum_from_json(load_json_argument(spectrum_arg, "--spectrum")));
      out << format_double(v) << "\n";
      return kExitOk;
    }
    if (influence->parsed()) {
      out << format_double(influence_function(
                 spectrum_from_json(load_json_argument(spectrum_arg, "--spectrum")),
                 distribution_from_json(load_json_argument(dist_arg, "--dist")), point))
          << "\n";
      return kExitOk;
    }
    if (distance->parsed()) {
      const Sample x = detail::read_sample(sample_path, in);
      const auto dist = distribution_from_json(load_json_argument(dist_arg, "--dist"));
      Json result = {{"n", x.size()}, {"m", m}, {"W1", wasserstein1(x, dist)}};
      if (dist.continuous()) {
        result["d_K"] = kolmogorov_distance(x, dist);
        result["d_K_m"] = truncated_kolmogorov(x, dist, m);
      }
      out << dump_json(detail::with_schema(result)) << "\n";
      return kExitOk;
    }
    for (auto* sub : experiments) {
      if (!sub->parsed()) continue;
      const Json config = load_json_argument(config_arg, "--config");
      const ExperimentReport report = run_experiment(sub->get_name(), config, seed, threads);
      out << report.to_json_string() << "\n";
      if (timing) err << "wall time: " << report.wall_seconds << " s\n";
      return report.pass ? kExitOk : kExitFailedCheck;
    }
    if (axioms->parsed()) {
      OracleProcess oracle(oracle_cmd);
      const AxiomReport report = check_axioms(
          [&oracle](std::span<const double> x) { return oracle(x); }, n, trials, {seed, 0},
          {law, comonotonic});
      out << dump_json(to_json(report)) << "\n";
      return report.pass() ? kExitOk : kExitFailedCheck;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  err << "error: no subcommand\n";
  return kExitInputError;
}

}  // namespace riskcore::cli

#endif  // RISKCORE_CLI_HPP_
