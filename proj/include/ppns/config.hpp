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

// Experiment description and its flat `key = value` text form.
//
//   # Accuracy against p
//   dataset    = data/ml-100k/u.data
//   strategies = knn, npns, pncf, ppns
//   sweep      = p
//   grid       = 0.1, 0.2, 0.3
//   trials     = 10000
//
// Blank lines and text after '#' are ignored. Keys are listed in
// apply_config_key below.

#ifndef PPNS_CONFIG_HPP_
#define PPNS_CONFIG_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "ppns/pipeline.hpp"
#include "ppns/types.hpp"

namespace ppns {

// `beta` runs the same p grid as `p`; it names the security view of that
// sweep (observed against forecast partition depth).
enum class SweepVar { kP, kK, kRho, kBeta };

inline std::string_view to_string(SweepVar v) {
  switch (v) {
    case SweepVar::kP:
      return "p";
    case SweepVar::kK:
      return "k";
    case SweepVar::kRho:
      return "rho";
    case SweepVar::kBeta:
      return "beta";
  }
  return "?";
}

inline SweepVar parse_sweep_var(std::string_view name) {
  if (name == "p") return SweepVar::kP;
  if (name == "k") return SweepVar::kK;
  if (name == "rho") return SweepVar::kRho;
  if (name == "beta") return SweepVar::kBeta;
  throw Error(Errc::kInvalidArgument,
              "unknown sweep variable '" + std::string(name) + "'");
}

struct ExperimentConfig {
  std::string dataset;
  std::vector<Strategy> strategies;
  SweepVar sweep = SweepVar::kP;
  std::vector<double> grid;
  PipelineParams base;  // `strategy` is ignored; `strategies` applies
  std::uint64_t seed = 1;
  std::size_t trials = 10000;
  std::size_t threads = 1;

  // Parameters of one grid point.
  PipelineParams at(double value, Strategy strategy) const {
    PipelineParams p = base;
    p.strategy = strategy;
    switch (sweep) {
      case SweepVar::kP:
      case SweepVar::kBeta:
        p.p = value;
        break;
      case SweepVar::kK:
        p.k = static_cast<std::size_t>(std::llround(value));
        break;
      case SweepVar::kRho:
        p.rho = value;
        break;
    }
    return p;
  }

  void validate() const {
    require(!strategies.empty(), "config lists no strategies");
    require(!grid.empty(), "config grid is empty");
    require(trials >= 1, "trials must be >= 1");
    require(threads >= 1, "threads must be >= 1");
    for (double v : grid) {
      for (Strategy s : strategies) {
        const PipelineParams p = at(v, s);
        require(p.p > 0 && p.p <= 1, "p must lie in (0, 1]");
        require(p.k >= 1, "k must be >= 1");
        if (sweep == SweepVar::kK) {
          require(v == std::round(v), "k grid values must be integers");
        }
        p.privacy(1.0).validate();
      }
    }
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto part = trim(s.substr(0, comma));
    if (!part.empty()) out.push_back(part);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

inline double to_double(std::string_view s, std::string_view key) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(v),
          "bad number '" + std::string(s) + "' for key " + std::string(key),
          Errc::kParse);
  return v;
}

inline std::uint64_t to_unsigned(std::string_view s, std::string_view key) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size(),
          "bad integer '" + std::string(s) + "' for key " + std::string(key),
          Errc::kParse);
  return v;
}

}  // namespace detail

// Applies one setting; throws on unknown keys and malformed values.
inline void apply_config_key(ExperimentConfig& config, std::string_view key,
                             std::string_view value) {
  if (key == "dataset") {
    config.dataset = std::string(value);
  } else if (key == "strategies") {
    config.strategies.clear();
    for (auto s : detail::split_list(value)) {
      config.strategies.push_back(parse_strategy(s));
    }
  } else if (key == "sweep") {
    config.sweep = parse_sweep_var(value);
  } else if (key == "grid") {
    config.grid.clear();
    for (auto s : detail::split_list(value)) {
      config.grid.push_back(detail::to_double(s, key));
    }
  } else if (key == "epsilon") {
    config.base.epsilon = detail::to_double(value, key);
  } else if (key == "k") {
    config.base.k = detail::to_unsigned(value, key);
  } else if (key == "p") {
    config.base.p = detail::to_double(value, key);
  } else if (key == "rho") {
    config.base.rho = detail::to_double(value, key);
  } else if (key == "rs_override") {
    config.base.rs_override = detail::to_double(value, key);
  } else if (key == "seed" || key == "rng_seed") {
    config.seed = detail::to_unsigned(value, key);
  } else if (key == "trials") {
    config.trials = detail::to_unsigned(value, key);
  } else if (key == "threads") {
    config.threads = detail::to_unsigned(value, key);
  } else if (key == "metric") {
    config.base.metric = parse_metric(value);
  } else if (key == "rs_route") {
    config.base.route = parse_sensitivity_route(value);
  } else if (key == "pncf_noise") {
    config.base.pncf_noise = parse_noise_scope(value);
  } else {
    throw Error(Errc::kParse, "unknown config key '" + std::string(key) + "'");
  }
}

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    view = detail::trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find('=');
    try {
      require(eq != std::string_view::npos, "expected key = value",
              Errc::kParse);
      const auto key = detail::trim(view.substr(0, eq));
      const auto value = detail::trim(view.substr(eq + 1));
      require(!key.empty() && !value.empty(), "expected key = value",
              Errc::kParse);
      apply_config_key(config, key, value);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(number) + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open config " + path, Errc::kIo);
  return parse_config(in);
}

}  // namespace ppns

#endif  // PPNS_CONFIG_HPP_
