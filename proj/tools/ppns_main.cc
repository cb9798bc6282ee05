//
// Copyright 2026 The PPNS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end: ingest, experiment, attack, bounds, predict and
// candidates subcommands. Results go to stdout as CSV, diagnostics to stderr.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ppns/ppns.hpp"

namespace {

using ppns::Error;
using ppns::PipelineParams;
using ppns::RatingMatrix;

ppns::RatingMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  ppns::require(in.good(), "cannot open " + path, ppns::Errc::kIo);
  return ppns::parse_ratings(in);
}

// Flags shared by every subcommand that runs a selection strategy.
struct StrategyFlags {
  std::string strategy = "ppns";
  std::size_t k = 50;
  double p = 0.5;
  double epsilon = 1.0;
  double rho = 0.5;
  std::optional<double> rs_override;
  std::string metric = "cosine";
  std::string rs_route = "eq3";
  std::string pncf_noise = "selected";

  void attach(CLI::App* app) {
    app->add_option("--strategy", strategy, "knn, npns, pncf or ppns")
        ->capture_default_str();
    app->add_option("--k", k, "neighbour set size")->capture_default_str();
    app->add_option("--p", p, "partition parameter of ppns")
        ->capture_default_str();
    app->add_option("--epsilon", epsilon, "privacy budget")
        ->capture_default_str();
    app->add_option("--rho", rho, "truncation confidence of pncf")
        ->capture_default_str();
    app->add_option("--rs-override", rs_override,
                    "fixed sensitivity instead of the per-target value");
    app->add_option("--metric", metric, "cosine, cosine-corated or pearson")
        ->capture_default_str();
    app->add_option("--rs-route", rs_route, "eq3 or removal")
        ->capture_default_str();
    app->add_option("--pncf-noise", pncf_noise, "selected or all")
        ->capture_default_str();
  }

  PipelineParams params() const {
    PipelineParams out;
    out.strategy = ppns::parse_strategy(strategy);
    out.k = k;
    out.p = p;
    out.epsilon = epsilon;
    out.rho = rho;
    out.rs_override = rs_override;
    out.metric = ppns::parse_metric(metric);
    out.route = ppns::parse_sensitivity_route(rs_route);
    out.pncf_noise = ppns::parse_noise_scope(pncf_noise);
    return out;
  }
};

std::string fmt4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

int run_ingest(const std::string& path) {
  const RatingMatrix m = load_matrix(path);
  std::cout << "users,items,ratings,global_mean\n"
            << m.user_count() << ',' << m.item_count() << ',' << m.size() << ','
            << fmt4(m.global_mean()) << '\n';
  return 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out,
                       const std::string& plot, std::optional<std::size_t> trials,
                       std::optional<std::size_t> threads) {
  ppns::ExperimentConfig config = ppns::load_config(config_path);
  if (trials) config.trials = *trials;
  if (threads) config.threads = *threads;
  ppns::ReportTable table;
  int status = 0;
  try {
    table = ppns::run_experiment(config);
  } catch (const ppns::ExperimentAborted& e) {
    std::cerr << "experiment aborted: " << e.what() << '\n';
    table = e.partial();
    status = 1;
    if (table.rows.empty()) return status;
  }
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
  if (out.empty() || out == "-") {
    ppns::emit_report(table, std::cout);
  } else {
    std::ofstream file(out);
    ppns::require(file.good(), "cannot write " + out, ppns::Errc::kIo);
    ppns::emit_report(table, file);
  }
  if (!plot.empty()) {
    std::ofstream file(plot);
    ppns::require(file.good(), "cannot write " + plot, ppns::Errc::kIo);
    ppns::emit_plot_data(table, file);
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partitioned probabilistic neighbour selection toolkit"};
  app.require_subcommand(1);

  std::string path;
  auto* ingest = app.add_subcommand("ingest", "summarise a u.data file");
  ingest->add_option("path", path, "tab-separated ratings")->required();

  std::string config_path, out_path, plot_path;
  std::optional<std::size_t> trials_override, threads;
  auto* experiment = app.add_subcommand("experiment", "run an MAE sweep");
  experiment->add_option("--config", config_path, "key = value file")
      ->required();
  experiment->add_option("--out", out_path, "report CSV (default stdout)");
  experiment->add_option("--plot-data", plot_path, "long-format plot CSV");
  experiment->add_option("--trials", trials_override, "override trial count");
  experiment->add_option("--threads", threads, "worker threads");

  StrategyFlags attack_flags;
  std::string attack_data;
  std::int64_t attack_target = 1;
  std::size_t known = 8, budget = 1, attack_trials = 100, honest = 1000;
  std::uint64_t attack_seed = 1;
  bool toy = false;
  auto* attack = app.add_subcommand("attack", "simulate the kNN attack");
  attack_flags.attach(attack);
  attack->add_option("--data", attack_data, "ratings file");
  attack->add_option("--target", attack_target, "target user id")
      ->capture_default_str();
  attack->add_flag("--toy", toy, "use the built-in toy matrix");
  attack->add_option("--honest", honest, "honest users in the toy matrix")
      ->capture_default_str();
  attack->add_option("--m", known, "ratings known to the attacker")
      ->capture_default_str();
  attack->add_option("--beta", budget, "fakes injected = beta * k")
      ->capture_default_str();
  attack->add_option("--trials", attack_trials)->capture_default_str();
  attack->add_option("--seed", attack_seed)->capture_default_str();

  std::size_t bn = 0, bk = 50;
  double b_eps = 1.0, b_rs = 1.0, b_sim1 = 1.0;
  std::optional<double> b_alpha0, b_p;
  std::string b_sims;
  auto* bounds = app.add_subcommand("bounds", "p bounds and beta forecast");
  bounds->add_option("--n", bn, "candidate count")->required();
  bounds->add_option("--k", bk)->capture_default_str();
  bounds->add_option("--epsilon", b_eps)->capture_default_str();
  bounds->add_option("--rs", b_rs, "sensitivity")->capture_default_str();
  bounds->add_option("--sim1", b_sim1, "top similarity (ignored with "
                                       "--similarities)")
      ->capture_default_str();
  bounds->add_option("--similarities", b_sims,
                     "candidate CSV or one similarity per line");
  bounds->add_option("--alpha0", b_alpha0, "accuracy target");
  bounds->add_option("--p", b_p, "p for the beta forecast");

  StrategyFlags predict_flags;
  std::string predict_data;
  std::int64_t p_user = 0, p_item = 0;
  std::uint64_t p_seed = 1;
  bool no_mask = false;
  auto* predict = app.add_subcommand("predict", "predict one rating");
  predict_flags.attach(predict);
  predict->add_option("--data", predict_data)->required();
  predict->add_option("--user", p_user)->required();
  predict->add_option("--item", p_item)->required();
  predict->add_option("--seed", p_seed)->capture_default_str();
  predict->add_flag("--no-mask", no_mask,
                    "keep an existing rating of the pair in the matrix");

  std::string c_data, c_metric = "cosine";
  std::int64_t c_user = 0;
  auto* candidates = app.add_subcommand("candidates", "ranked candidate list");
  candidates->add_option("--data", c_data)->required();
  candidates->add_option("--user", c_user)->required();
  candidates->add_option("--metric", c_metric)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return run_ingest(path);
    if (*experiment) {
      return run_experiment_cmd(config_path, out_path, plot_path,
                                trials_override, threads);
    }
    if (*attack) {
      ppns::AttackConfig config;
      config.strategy = attack_flags.params();
      config.m = known;
      config.budget_multiplier = budget;
      config.trials = attack_trials;
      config.seed = attack_seed;
      RatingMatrix matrix;
      if (toy) {
        matrix = ppns::attack_toy_matrix(known, honest);
        config.target = ppns::UserId{1};
      } else {
        ppns::require(!attack_data.empty(), "attack needs --data or --toy");
        matrix = load_matrix(attack_data);
        config.target = ppns::UserId{attack_target};
      }
      const auto report = ppns::run_attack(matrix, config);
      std::cout << "strategy,k,p,m,beta,trials,exposure_rate,"
                   "full_reconstruction_rate\n"
                << attack_flags.strategy << ',' << config.strategy.k << ','
                << fmt4(config.strategy.p) << ',' << known << ',' << budget
                << ',' << report.trials << ',' << fmt4(report.exposure_rate)
                << ',' << fmt4(report.full_reconstruction_rate) << '\n';
      return 0;
    }
    if (*bounds) {
      std::optional<ppns::CandidateList> list;
      if (!b_sims.empty()) {
        std::ifstream in(b_sims);
        ppns::require(in.good(), "cannot open " + b_sims, ppns::Errc::kIo);
        list = ppns::read_candidates_csv(in);
        ppns::require(list->size() >= 1, "similarity list is empty");
        b_sim1 = (*list)[0].similarity;
      }
      ppns::PrivacyParams privacy;
      privacy.epsilon = b_eps;
      privacy.k = static_cast<int>(bk);
      privacy.rs = b_rs;
      const double omega1 = ppns::selection_weight(b_sim1, privacy);
      const double lower = ppns::p_lower_bound_security(bn, bk, omega1);
      const double upper = ppns::p_upper_bound_security(bk);
      std::optional<double> from_accuracy;
      if (b_alpha0) {
        ppns::require(list.has_value(), "--alpha0 needs --similarities");
        from_accuracy = ppns::p_from_accuracy(*b_alpha0, *list, bk);
      }
      const double p = b_p.value_or(
          std::min(upper, std::max(lower, from_accuracy.value_or(lower))));
      const auto forecast = ppns::predict_beta(p, bk);
      std::cout << "omega1,p_lower,p_accuracy,p_upper,p,j,beta\n"
                << fmt4(omega1) << ',' << fmt4(lower) << ','
                << (from_accuracy ? fmt4(*from_accuracy) : "") << ','
                << fmt4(upper) << ',' << fmt4(p) << ',' << forecast.j << ','
                << fmt4(forecast.beta_analytic) << '\n';
      return 0;
    }
    if (*predict) {
      RatingMatrix matrix = load_matrix(predict_data);
      const ppns::UserId user{p_user};
      const ppns::ItemId item{p_item};
      if (!no_mask && matrix.rating(user, item)) {
        matrix = matrix.without(user, item);
      }
      const PipelineParams params = predict_flags.params();
      const auto ctx = ppns::prepare_trial(matrix, user, params);
      ppns::Rng rng(p_seed);
      const auto rec = ppns::recommend(matrix, ctx, params, item, rng);
      static constexpr const char* kSource[] = {"neighbours", "user_mean",
                                                "global_mean"};
      std::cout << "user,item,strategy,prediction,neighbours_used,beta,source\n"
                << p_user << ',' << p_item << ',' << predict_flags.strategy
                << ',' << fmt4(rec.prediction.value) << ','
                << rec.prediction.neighbours_used << ','
                << rec.neighbours.beta_observed << ','
                << kSource[static_cast<int>(rec.prediction.source)] << '\n';
      return 0;
    }
    if (*candidates) {
      const RatingMatrix matrix = load_matrix(c_data);
      ppns::write_candidates_csv(
          ppns::candidate_list(matrix, ppns::UserId{c_user},
                               ppns::parse_metric(c_metric)),
          std::cout);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
