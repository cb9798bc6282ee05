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

// Multivariate Wallenius non-central hypergeometric analytics: the law of
// category counts under sequential weighted sampling without replacement,
// and the accuracy / security forecasts built on it.
//
// A population has c categories; category i holds m_i individuals of weight
// omega_i. Each draw takes a remaining individual with probability
// proportional to its weight, and `draws` individuals are taken in total.
// Candidate neighbours map onto this with m_i = 1 and omega_i = the
// exponential-mechanism weight.

#ifndef PPNS_WALLENIUS_HPP_
#define PPNS_WALLENIUS_HPP_

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ppns/quadrature.hpp"
#include "ppns/similarity.hpp"
#include "ppns/types.hpp"

namespace ppns {

struct WalleniusSpec {
  std::vector<int> m;
  std::vector<double> omega;
  int draws = 0;

  std::size_t categories() const { return m.size(); }
  int population() const { return std::accumulate(m.begin(), m.end(), 0); }

  void validate() const {
    require(!m.empty(), "a Wallenius spec needs at least one category");
    require(m.size() == omega.size(), "m and omega differ in length");
    for (std::size_t i = 0; i < m.size(); ++i) {
      require(m[i] >= 1, "category counts must be >= 1");
      require(omega[i] > 0 && std::isfinite(omega[i]),
              "category weights must be positive");
    }
    require(draws >= 0, "draw count must be >= 0");
    require(draws <= population(), "more draws than individuals");
  }
};

struct MeanVector {
  std::vector<double> mu;
};

struct SecurityForecast {
  double p = 0;
  int j = 1;
  double beta_analytic = 1;
};

// Law of the next draw given the counts drawn so far.
inline std::vector<double> draw_probability(const WalleniusSpec& spec,
                                            std::span<const int> drawn) {
  spec.validate();
  require(drawn.size() == spec.categories(), "count vector length mismatch");
  double total = 0;
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    require(drawn[i] >= 0 && drawn[i] <= spec.m[i],
            "drawn counts must lie in [0, m_i]");
    total += (spec.m[i] - drawn[i]) * spec.omega[i];
  }
  require(total > 0, "every category is exhausted");
  std::vector<double> p(drawn.size());
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    p[i] = (spec.m[i] - drawn[i]) * spec.omega[i] / total;
  }
  return p;
}

namespace detail {

inline double log_binomial(int n, int r) {
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

}  // namespace detail

inline constexpr double kPmfTolerance = 1e-10;

// P(x) = prod_i C(m_i, x_i) * integral_0^1 prod_i (1 - t^(omega_i/d))^x_i dt
// with d = sum_i omega_i (m_i - x_i).
inline double wallenius_pmf(const WalleniusSpec& spec, std::span<const int> x) {
  spec.validate();
  require(x.size() == spec.categories(), "count vector length mismatch");
  int total = 0;
  double d = 0;
  double log_lambda = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] >= 0 && x[i] <= spec.m[i], "counts must lie in [0, m_i]");
    total += x[i];
    d += spec.omega[i] * (spec.m[i] - x[i]);
    log_lambda += detail::log_binomial(spec.m[i], x[i]);
  }
  require(total == spec.draws, "counts must sum to the number of draws");
  if (d == 0) return 1.0;  // everything drawn: the only outcome

  std::vector<double> exponents;
  std::vector<int> powers;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    exponents.push_back(spec.omega[i] / d);
    powers.push_back(x[i]);
  }
  const double lambda = std::exp(log_lambda);
  auto integrand = [&](double t) {
    double prod = 1;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      // 1 - t^a computed as -expm1(a ln t) keeps precision near t = 1.
      const double factor = -std::expm1(exponents[i] * std::log(t));
      prod *= std::pow(factor, powers[i]);
    }
    return prod;
  };
  // Tolerance on P, not on the integral.
  const auto r = integrate_adaptive(integrand, 0.0, 1.0,
                                    kPmfTolerance / std::max(1.0, lambda));
  return lambda * r.value;
}

// Manly's approximation: the common value A = (1 - mu_i/m_i)^(1/omega_i)
// solves sum_i m_i (1 - A^omega_i) = draws, found by bisection on (0, 1).
inline MeanVector approx_mean(const WalleniusSpec& spec) {
  spec.validate();
  const std::size_t c = spec.categories();
  MeanVector out;
  if (spec.draws == spec.population()) {
    out.mu.assign(spec.m.begin(), spec.m.end());
    return out;
  }
  if (spec.draws == 0) {
    out.mu.assign(c, 0.0);
    return out;
  }
  auto g = [&](double a) {
    double s = 0;
    for (std::size_t i = 0; i < c; ++i) {
      s += spec.m[i] * -std::expm1(spec.omega[i] * std::log(a));
    }
    return s - spec.draws;
  };
  double lo = 0, hi = 1, a = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    a = 0.5 * (lo + hi);
    const double v = g(a);
    if (std::abs(v) < 1e-12) break;
    if (v > 0) {
      lo = a;
    } else {
      hi = a;
    }
  }
  out.mu.resize(c);
  for (std::size_t i = 0; i < c; ++i) {
    out.mu[i] = spec.m[i] * -std::expm1(spec.omega[i] * std::log(a));
  }
  return out;
}

// alpha = sum_i sim(a, i) mu_i.
inline double expected_accuracy(const CandidateList& candidates,
                                const MeanVector& mean) {
  require(mean.mu.size() == candidates.size(),
          "mean vector must align with the candidate list");
  double alpha = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    alpha += candidates[i].similarity * mean.mu[i];
  }
  return alpha;
}

// Smallest p for which partitioned selection beats global weighted
// selection on accuracy: 1 - ((n - k) / n)^omega_1.
inline double p_lower_bound_security(std::size_t n, std::size_t k,
                                     double omega_1) {
  require(n > k, "bound needs n > k");
  require(omega_1 > 0, "omega_1 must be > 0");
  const double ratio = static_cast<double>(n - k) / static_cast<double>(n);
  return 1.0 - std::pow(ratio, omega_1);
}

// Largest p that never returns the exact top-k set: (k - 1) / k.
inline double p_upper_bound_security(std::size_t k) {
  require(k >= 1, "k must be >= 1");
  return static_cast<double>(k - 1) / static_cast<double>(k);
}

// Smallest p that guarantees accuracy alpha_0: alpha_0 / sum_{i<=k} sim(a,i).
inline double p_from_accuracy(double alpha_0, const CandidateList& candidates,
                              std::size_t k) {
  require(alpha_0 >= 0, "alpha_0 must be >= 0");
  require(k >= 1 && k <= candidates.size(), "k out of range");
  double top = 0;
  for (std::size_t i = 0; i < k; ++i) top += candidates[i].similarity;
  require(top > 0, "top-k similarity sum must be positive");
  if (alpha_0 > top) {
    throw Error(Errc::kUnattainable,
                "accuracy target unattainable: alpha_0 exceeds the top-k "
                "similarity sum");
  }
  return alpha_0 / top;
}

// j = ceil(1 + (ln 1.5 - ln(pk)) / ln(1 - p)) is the first partition whose
// quota drops below 3/2; beta = (j - 1) + (1 - p)^(j-1) k. When pk <= 1.5
// the first partition already qualifies and j = 1.
inline SecurityForecast predict_beta(double p, std::size_t k) {
  require(p > 0 && p < 1, "beta forecast needs p in (0, 1)");
  require(k >= 1, "k must be >= 1");
  const double kd = static_cast<double>(k);
  SecurityForecast f;
  f.p = p;
  if (p * kd > 1.5) {
    const double arg = 1.0 + (std::log(1.5) - std::log(p * kd)) / std::log1p(-p);
    f.j = static_cast<int>(std::ceil(arg));
  } else {
    f.j = 1;
  }
  f.beta_analytic = (f.j - 1) + std::pow(1.0 - p, f.j - 1) * kd;
  return f;
}

}  // namespace ppns

#endif  // PPNS_WALLENIUS_HPP_
