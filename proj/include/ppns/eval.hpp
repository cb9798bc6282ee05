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

// MAE experiments: sample a rating, mask it, predict it back with each
// strategy, and aggregate over trials.

#ifndef PPNS_EVAL_HPP_
#define PPNS_EVAL_HPP_

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ppns/config.hpp"
#include "ppns/dataset.hpp"
#include "ppns/pipeline.hpp"
#include "ppns/selection.hpp"
#include "ppns/types.hpp"
#include "ppns/wallenius.hpp"

namespace ppns {

// Mean of |truth - predicted| over (truth, predicted) pairs.
inline double mae(std::span<const std::pair<double, double>> pairs) {
  require(!pairs.empty(), "MAE of an empty list");
  double sum = 0;
  for (const auto& [truth, predicted] : pairs) sum += std::abs(truth - predicted);
  return sum / static_cast<double>(pairs.size());
}

struct ReportRow {
  Strategy strategy = Strategy::kKnn;
  SweepVar sweep_var = SweepVar::kP;
  double sweep_value = 0;
  double mae = 0;
  double beta = 0;  // mean observed partition depth
  std::optional<double> beta_analytic;  // forecast, PPNS only
  std::size_t trials = 0;
  double seconds = 0;
  std::vector<double> errors;  // per-trial |truth - prediction|, not emitted
};

struct ReportTable {
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;
};

// Thrown when a grid point cannot run; carries the rows completed before it.
class ExperimentAborted : public Error {
 public:
  ExperimentAborted(const std::string& message, ReportTable partial)
      : Error(Errc::kInvalidArgument, message), partial_(std::move(partial)) {}
  const ReportTable& partial() const noexcept { return partial_; }

 private:
  ReportTable partial_;
};

// Forecast partition depth of PPNS at (p, k); 1 when the selection
// degenerates to the top-k set.
inline double forecast_beta(double p, std::size_t k) {
  if (detail::ceil_quota(p * static_cast<double>(k)) >= k) return 1.0;
  return predict_beta(p, k).beta_analytic;
}

namespace detail {

struct Failure {
  std::size_t grid = std::numeric_limits<std::size_t>::max();
  std::size_t strategy = 0;
  std::string message;

  bool before(const Failure& o) const {
    return grid != o.grid ? grid < o.grid : strategy < o.strategy;
  }
};

// Results of a contiguous block of trials, written into shared buffers at
// fixed offsets so the aggregation order never depends on scheduling.
struct TrialBlock {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<double> seconds;  // per (grid, strategy)
  Failure failure;
};

}  // namespace detail

// Trial t draws its test point from derive_rng(seed, {0, t}); strategy s
// draws from derive_rng(seed, {1, t, s}) at every grid point, so grid points
// are compared on common random numbers. Serial and threaded runs agree
// exactly.
inline ReportTable run_experiment(const RatingMatrix& matrix,
                                  const ExperimentConfig& config) {
  config.validate();
  require(!matrix.empty(), "experiment on an empty matrix");
  const std::size_t G = config.grid.size();
  const std::size_t S = config.strategies.size();
  const std::size_t T = config.trials;
  bool need_rs = false;
  for (Strategy s : config.strategies) need_rs = need_rs || is_randomised(s);

  const auto entries = matrix.entries();
  std::vector<double> errors(G * S * T, 0.0);
  std::vector<double> depths(G * S * T, 0.0);

  auto run_block = [&](detail::TrialBlock& block) {
    using Clock = std::chrono::steady_clock;
    block.seconds.assign(G * S, 0.0);
    for (std::size_t t = block.begin; t < block.end; ++t) {
      const auto t0 = Clock::now();
      Rng point_rng = derive_rng(config.seed, {0, t});
      const TestPoint tp = sample_test_point(entries, point_rng);
      const RatingMatrix masked = matrix.without(tp.user, tp.item);
      const TrialContext ctx =
          prepare_trial(masked, tp.user, config.base.metric,
                        config.base.rs_override, config.base.route, need_rs);
      const double shared =
          std::chrono::duration<double>(Clock::now() - t0).count() /
          static_cast<double>(G * S);

      for (std::size_t g = 0; g < G && g < block.failure.grid; ++g) {
        for (std::size_t s = 0; s < S; ++s) {
          const auto t1 = Clock::now();
          const PipelineParams params =
              config.at(config.grid[g], config.strategies[s]);
          Rng rng = derive_rng(config.seed, {1, t, s});
          try {
            const auto rec = recommend(masked, ctx, params, tp.item, rng);
            const std::size_t slot = (g * S + s) * T + t;
            errors[slot] = std::abs(tp.true_rating - rec.prediction.value);
            depths[slot] = static_cast<double>(rec.neighbours.beta_observed);
          } catch (const Error& e) {
            detail::Failure f{g, s, e.what()};
            if (f.before(block.failure)) block.failure = std::move(f);
            break;
          }
          block.seconds[g * S + s] +=
              shared +
              std::chrono::duration<double>(Clock::now() - t1).count();
        }
      }
    }
  };

  const std::size_t workers = std::min(config.threads, T);
  std::vector<detail::TrialBlock> blocks(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    blocks[w].begin = T * w / workers;
    blocks[w].end = T * (w + 1) / workers;
  }
  if (workers == 1) {
    run_block(blocks[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> thrown(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          run_block(blocks[w]);
        } catch (...) {
          thrown[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : thrown) {
      if (e) std::rethrow_exception(e);
    }
  }

  detail::Failure failure;
  for (const auto& b : blocks) {
    if (b.failure.before(failure)) failure = b.failure;
  }

  ReportTable table;
  for (std::size_t g = 0; g < G && g < failure.grid; ++g) {
    for (std::size_t s = 0; s < S; ++s) {
      ReportRow row;
      row.strategy = config.strategies[s];
      row.sweep_var = config.sweep;
      row.sweep_value = config.grid[g];
      row.trials = T;
      double err = 0, depth = 0;
      row.errors.assign(errors.begin() + (g * S + s) * T,
                        errors.begin() + (g * S + s + 1) * T);
      for (std::size_t t = 0; t < T; ++t) {
        err += errors[(g * S + s) * T + t];
        depth += depths[(g * S + s) * T + t];
      }
      row.mae = err / static_cast<double>(T);
      row.beta = depth / static_cast<double>(T);
      for (const auto& b : blocks) row.seconds += b.seconds[g * S + s];
      if (row.strategy == Strategy::kPpns) {
        const PipelineParams params = config.at(row.sweep_value, row.strategy);
        row.beta_analytic = forecast_beta(params.p, params.k);
        if (std::abs(*row.beta_analytic - row.beta) >= 1.0) {
          char buf[160];
          std::snprintf(buf, sizeof(buf),
                        "ppns at %s=%g: observed beta %.4f vs forecast %.4f",
                        std::string(to_string(row.sweep_var)).c_str(),
                        row.sweep_value, row.beta, *row.beta_analytic);
          table.warnings.emplace_back(buf);
        }
      }
      table.rows.push_back(row);
    }
  }
  if (failure.grid < G) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "grid point %s=%g, strategy ",
                  std::string(to_string(config.sweep)).c_str(),
                  config.grid[failure.grid]);
    throw ExperimentAborted(
        std::string(buf) +
            std::string(to_string(config.strategies[failure.strategy])) +
            ": " + failure.message,
        std::move(table));
  }
  return table;
}

inline ReportTable run_experiment(const ExperimentConfig& config) {
  std::ifstream in(config.dataset);
  require(in.good(), "cannot open dataset " + config.dataset, Errc::kIo);
  return run_experiment(parse_ratings(in), config);
}

inline constexpr std::string_view kReportHeader =
    "strategy,sweep_var,sweep_value,mae,beta,trials,seconds";

// Writes the CSV report; returns the number of bytes written.
inline std::size_t emit_report(const ReportTable& table, std::ostream& out) {
  require(!table.rows.empty(), "cannot emit an empty report");
  std::ostringstream buf;
  buf << kReportHeader << '\n';
  char line[256];
  for (const auto& r : table.rows) {
    std::snprintf(line, sizeof(line), "%s,%s,%.4f,%.4f,%.4f,%zu,%.4f\n",
                  std::string(to_string(r.strategy)).c_str(),
                  std::string(to_string(r.sweep_var)).c_str(), r.sweep_value,
                  r.mae, r.beta, r.trials, r.seconds);
    buf << line;
  }
  const std::string text = buf.str();
  out << text;
  out.flush();
  require(out.good(), "failed to write report", Errc::kIo);
  return text.size();
}

inline ReportTable parse_report(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) &&
              detail::trim(line) == kReportHeader,
          "report header missing", Errc::kParse);
  ReportTable table;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_list(line);
    require(fields.size() == 7,
            "line " + std::to_string(number) + ": expected 7 fields",
            Errc::kParse);
    ReportRow r;
    r.strategy = parse_strategy(fields[0]);
    r.sweep_var = parse_sweep_var(fields[1]);
    r.sweep_value = detail::to_double(fields[2], "sweep_value");
    r.mae = detail::to_double(fields[3], "mae");
    r.beta = detail::to_double(fields[4], "beta");
    r.trials = detail::to_unsigned(fields[5], "trials");
    r.seconds = detail::to_double(fields[6], "seconds");
    table.rows.push_back(r);
  }
  return table;
}

// Long-format series for plotting: accuracy and partition depth against the
// swept variable, plus the forecast depth for PPNS.
inline void emit_plot_data(const ReportTable& table, std::ostream& out) {
  require(!table.rows.empty(), "cannot emit plot data for an empty report");
  out << "figure,series,x,y\n";
  char line[256];
  auto emit = [&](std::string_view figure, std::string_view series, double x,
                  double y) {
    std::snprintf(line, sizeof(line), "%s,%s,%.4f,%.4f\n",
                  std::string(figure).c_str(), std::string(series).c_str(), x,
                  y);
    out << line;
  };
  const std::string var(to_string(table.rows.front().sweep_var));
  for (const auto& r : table.rows) {
    emit("mae_vs_" + var, to_string(r.strategy), r.sweep_value, r.mae);
  }
  for (const auto& r : table.rows) {
    emit("beta_vs_" + var, to_string(r.strategy), r.sweep_value, r.beta);
  }
  for (const auto& r : table.rows) {
    if (r.beta_analytic) {
      emit("beta_vs_" + var, "ppns_forecast", r.sweep_value, *r.beta_analytic);
    }
  }
  require(out.good(), "failed to write plot data", Errc::kIo);
}

}  // namespace ppns

#endif  // PPNS_EVAL_HPP_
