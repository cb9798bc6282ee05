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

// Exponential-mechanism selection weights, similarity sensitivity, the
// truncation threshold of private neighbour CF, and Laplace noise.

#ifndef PPNS_PRIVACY_HPP_
#define PPNS_PRIVACY_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ppns/dataset.hpp"
#include "ppns/similarity.hpp"
#include "ppns/types.hpp"

namespace ppns {

struct PrivacyParams {
  double epsilon = 1.0;
  int k = 50;
  double rs = 1.0;
  double rho = 0.5;
  std::optional<double> rs_override;

  double sensitivity() const { return rs_override.value_or(rs); }

  void validate() const {
    require(epsilon > 0 && std::isfinite(epsilon), "epsilon must be > 0");
    require(k >= 1, "k must be >= 1");
    require(rs > 0 && std::isfinite(rs), "sensitivity must be > 0");
    require(rho > 0 && rho < 1, "rho must lie in (0, 1)");
    require(!rs_override || *rs_override > 0, "rs_override must be > 0");
  }
};

namespace detail {

struct PairNorms {
  double i_sq = 0;  // squared norm of user i's vector under the metric
  double j_sq = 0;
};

// Squared norms used by the cosine form of `metric`: whole profiles for
// kCosine, co-rated items otherwise.
inline PairNorms pair_norms(const RatingMatrix& m, UserId i, UserId j,
                            Metric metric) {
  PairNorms n;
  if (metric == Metric::kCosine) {
    n.i_sq = m.profile_sum_sq(i);
    n.j_sq = m.profile_sum_sq(j);
    return n;
  }
  for_each_corated(m.profile(i), m.profile(j), [&](ItemId, int ri, int rj) {
    n.i_sq += static_cast<double>(ri) * ri;
    n.j_sq += static_cast<double>(rj) * rj;
  });
  return n;
}

}  // namespace detail

// Recommendation-aware sensitivity of the similarity score for one pair:
//
//   max over s in S_ij of  r_is r_js / (|r_i'| |r_j'|)
//   and                    r_is r_js (|r_i||r_j| - |r_i'||r_j'|)
//                          / (|r_i||r_j||r_i'||r_j'|)
//
// where r' is the vector with the rating on s removed. When removing s
// leaves a zero vector the similarity falls to 0, and that drop (sim_ij) is
// used as the term. Pearson pairs use the co-rated cosine norms.
inline double recommendation_aware_sensitivity(const RatingMatrix& m,
                                               UserId i, UserId j,
                                               Metric metric = Metric::kCosine) {
  detail::require_user(m, i);
  detail::require_user(m, j);
  const auto norms = detail::pair_norms(m, i, j, metric);
  const double full = std::sqrt(norms.i_sq) * std::sqrt(norms.j_sq);
  double best = 0;
  bool any = false;
  detail::for_each_corated(
      m.profile(i), m.profile(j), [&](ItemId, int ri, int rj) {
        any = true;
        const double prod = static_cast<double>(ri) * rj;
        const double ni = norms.i_sq - static_cast<double>(ri) * ri;
        const double nj = norms.j_sq - static_cast<double>(rj) * rj;
        if (ni <= 0 || nj <= 0) {
          best = std::max(best, similarity(m, i, j, metric));
          return;
        }
        const double reduced = std::sqrt(ni) * std::sqrt(nj);
        best = std::max(best, prod / reduced);
        best = std::max(best, prod * (full - reduced) / (full * reduced));
      });
  return any ? best : 0.0;
}

// Exact max |sim(i,j) - sim'(i,j)| over every neighbouring matrix that
// drops one rating of user i or user j. Closed form for the cosine metrics;
// Pearson re-evaluates because a removal shifts the user mean.
inline double removal_sensitivity(const RatingMatrix& m, UserId i, UserId j,
                                  Metric metric = Metric::kCosine) {
  detail::require_user(m, i);
  detail::require_user(m, j);
  const double base = similarity(m, i, j, metric);
  const auto pi = m.profile(i);
  const auto pj = m.profile(j);

  if (metric == Metric::kPearson) {
    auto pearson_of = [](std::span<const ItemRating> a,
                         std::span<const ItemRating> b) {
      if (a.empty() || b.empty()) return 0.0;
      double sa = 0, sb = 0;
      for (const auto& r : a) sa += r.rating;
      for (const auto& r : b) sb += r.rating;
      const double ma = sa / static_cast<double>(a.size());
      const double mb = sb / static_cast<double>(b.size());
      double num = 0, da = 0, db = 0;
      std::size_t shared = 0;
      detail::for_each_corated(a, b, [&](ItemId, int ra, int rb) {
        num += (ra - ma) * (rb - mb);
        da += (ra - ma) * (ra - ma);
        db += (rb - mb) * (rb - mb);
        ++shared;
      });
      if (shared == 0 || da == 0 || db == 0) return 0.0;
      return std::clamp(num / std::sqrt(da * db), -1.0, 1.0);
    };
    double best = 0;
    auto drop_each = [&](std::span<const ItemRating> own,
                         std::span<const ItemRating> other) {
      std::vector<ItemRating> reduced(own.begin(), own.end());
      for (std::size_t s = 0; s < own.size(); ++s) {
        reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(s));
        best = std::max(best, std::abs(base - pearson_of(reduced, other)));
        reduced.insert(reduced.begin() + static_cast<std::ptrdiff_t>(s),
                       own[s]);
      }
    };
    drop_each(pi, pj);
    drop_each(pj, pi);
    return best;
  }

  double dot = 0;
  std::size_t shared = 0;
  detail::for_each_corated(pi, pj, [&](ItemId, int ri, int rj) {
    dot += static_cast<double>(ri) * rj;
    ++shared;
  });
  const auto norms = detail::pair_norms(m, i, j, metric);
  double best = 0;

  // Removing `own_rating` from one side, where `other_rating` is the partner
  // rating on the same item (0 when the item is not co-rated).
  auto consider = [&](double own_sq, double other_sq, int own_rating,
                      int other_rating) {
    const bool corated = other_rating != 0;
    if (!corated && metric == Metric::kCosineCorated) return;
    const double new_dot =
        corated ? dot - static_cast<double>(own_rating) * other_rating : dot;
    const std::size_t new_shared = corated ? shared - 1 : shared;
    const double new_own = own_sq - static_cast<double>(own_rating) * own_rating;
    const double new_other =
        metric == Metric::kCosineCorated
            ? other_sq - static_cast<double>(other_rating) * other_rating
            : other_sq;
    double after = 0;
    if (new_shared > 0 && new_own > 0 && new_other > 0) {
      after = std::min(1.0, new_dot / (std::sqrt(new_own) * std::sqrt(new_other)));
    }
    best = std::max(best, std::abs(base - after));
  };

  auto partner = [](std::span<const ItemRating> p, ItemId item) {
    auto it = std::lower_bound(
        p.begin(), p.end(), item,
        [](const ItemRating& r, ItemId x) { return r.item < x; });
    return (it != p.end() && it->item == item) ? it->rating : 0;
  };
  for (const auto& r : pi) {
    consider(norms.i_sq, norms.j_sq, r.rating, partner(pj, r.item));
  }
  for (const auto& r : pj) {
    consider(norms.j_sq, norms.i_sq, r.rating, partner(pi, r.item));
  }
  return best;
}

enum class SensitivityRoute { kRecommendationAware, kRemoval };

// Sensitivity for a trial: the max over every pair (target, u). Falls back
// to 1 when the target shares no item with anyone.
inline double target_sensitivity(
    const RatingMatrix& m, UserId target, Metric metric,
    SensitivityRoute route = SensitivityRoute::kRecommendationAware) {
  double best = 0;
  for (UserId u : m.user_ids()) {
    if (u == target) continue;
    const double s = route == SensitivityRoute::kRecommendationAware
                         ? recommendation_aware_sensitivity(m, target, u, metric)
                         : removal_sensitivity(m, target, u, metric);
    best = std::max(best, s);
  }
  return best > 0 ? best : 1.0;
}

inline double selection_weight(double similarity, const PrivacyParams& params) {
  return std::exp(params.epsilon * similarity /
                  (4.0 * params.k * params.sensitivity()));
}

// omega_i = exp(eps * sim(a,i) / (4 k RS)), aligned with candidate order.
inline std::vector<double> selection_weights(const CandidateList& candidates,
                                             const PrivacyParams& params) {
  params.validate();
  std::vector<double> w;
  w.reserve(candidates.size());
  for (const auto& c : candidates.entries) {
    require(std::isfinite(c.similarity), "non-finite similarity");
    w.push_back(selection_weight(c.similarity, params));
  }
  return w;
}

// lambda = min(sim_k, (4 k RS / eps) ln(k (n - k) / rho)).
inline double compute_lambda(double sim_k, std::size_t n,
                             const PrivacyParams& params) {
  params.validate();
  const auto k = static_cast<std::size_t>(params.k);
  require(n > k, "lambda needs more candidates than k");
  require(sim_k >= 0 && sim_k <= 1, "sim_k must lie in [0, 1]");
  const double bound = 4.0 * params.k * params.sensitivity() / params.epsilon *
                       std::log(static_cast<double>(k) *
                                static_cast<double>(n - k) / params.rho);
  return std::min(sim_k, bound);
}

// value + Laplace(0, sensitivity / epsilon), by inversion of one uniform.
inline double laplace_noise(double value, double sensitivity, double epsilon,
                            Rng& rng) {
  require(sensitivity > 0, "Laplace sensitivity must be > 0");
  require(epsilon > 0, "Laplace epsilon must be > 0");
  const double scale = sensitivity / epsilon;
  double u = uniform01(rng) - 0.5;
  while (u == -0.5) u = uniform01(rng) - 0.5;
  const double draw = -scale * std::copysign(1.0, u) *
                      std::log1p(-2.0 * std::abs(u));
  return value + draw;
}

}  // namespace ppns

#endif  // PPNS_PRIVACY_HPP_
