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

// Neighbour selection strategies. Every strategy consumes a candidate list
// (and, for the randomised ones, weights aligned with it) and returns exactly
// k distinct members tagged with their rank and size-k partition.

#ifndef PPNS_SELECTION_HPP_
#define PPNS_SELECTION_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppns/sampling.hpp"
#include "ppns/similarity.hpp"
#include "ppns/types.hpp"

namespace ppns {

enum class Strategy { kKnn, kNpns, kPncf, kPpns };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kKnn:
      return "knn";
    case Strategy::kNpns:
      return "npns";
    case Strategy::kPncf:
      return "pncf";
    case Strategy::kPpns:
      return "ppns";
  }
  return "?";
}

inline Strategy parse_strategy(std::string_view name) {
  if (name == "knn") return Strategy::kKnn;
  if (name == "npns") return Strategy::kNpns;
  if (name == "pncf") return Strategy::kPncf;
  if (name == "ppns") return Strategy::kPpns;
  throw Error(Errc::kInvalidArgument,
              "unknown strategy '" + std::string(name) + "'");
}

struct Neighbour {
  UserId user;
  double similarity;
  std::size_t rank;       // 1-based position in the candidate list
  std::size_t partition;  // ceil(rank / k)

  friend bool operator==(const Neighbour&, const Neighbour&) = default;
};

struct NeighbourSet {
  UserId target{};
  std::vector<Neighbour> members;  // ascending rank
  std::size_t beta_observed = 0;   // deepest partition reached

  std::vector<UserId> users() const {
    std::vector<UserId> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(m.user);
    return out;
  }

  friend bool operator==(const NeighbourSet&, const NeighbourSet&) = default;
};

// Consecutive slices of size k over a candidate list of length n.
struct Partitioning {
  std::size_t n = 0;
  std::size_t k = 1;

  std::size_t count() const { return (n + k - 1) / k; }
  // Half-open 0-based bounds of partition `index` (1-based).
  std::size_t begin(std::size_t index) const { return (index - 1) * k; }
  std::size_t end(std::size_t index) const { return std::min(n, index * k); }
  std::size_t partition_of(std::size_t rank0) const { return rank0 / k + 1; }
};

inline Partitioning partition_candidates(std::size_t n, std::size_t k) {
  require(k >= 1, "partition size must be >= 1");
  return {n, k};
}

namespace detail {

inline NeighbourSet make_neighbour_set(const CandidateList& candidates,
                                       std::vector<std::size_t> picked,
                                       std::size_t k) {
  std::sort(picked.begin(), picked.end());
  NeighbourSet out;
  out.target = candidates.target;
  out.members.reserve(picked.size());
  const Partitioning parts = partition_candidates(candidates.size(), k);
  for (std::size_t idx : picked) {
    const std::size_t part = parts.partition_of(idx);
    out.members.push_back(
        {candidates[idx].user, candidates[idx].similarity, idx + 1, part});
    out.beta_observed = std::max(out.beta_observed, part);
  }
  return out;
}

inline void check_k(const CandidateList& candidates, std::size_t k) {
  require(k >= 1, "k must be >= 1");
  require(candidates.size() >= k,
          "need at least k=" + std::to_string(k) + " candidates, have " +
              std::to_string(candidates.size()));
}

inline void check_weights(const CandidateList& candidates,
                          std::span<const double> weights) {
  require(weights.size() == candidates.size(),
          "weights must align with the candidate list");
  for (double w : weights) {
    require(w > 0 && std::isfinite(w), "weights must be positive and finite");
  }
}

// ceil with a relative slack so that products such as 0.98 * 50 that land a
// few ulps above an integer are not pushed to the next one.
inline std::size_t ceil_quota(double x) {
  const double c = std::ceil(x - 1e-9 * std::max(1.0, x));
  return static_cast<std::size_t>(std::max(1.0, c));
}

}  // namespace detail

inline NeighbourSet select_topk(const CandidateList& candidates,
                                std::size_t k) {
  detail::check_k(candidates, k);
  std::vector<std::size_t> picked(k);
  std::iota(picked.begin(), picked.end(), 0);
  return detail::make_neighbour_set(candidates, std::move(picked), k);
}

// Weighted sampling of k members without replacement over the whole list.
inline NeighbourSet select_global_probabilistic(const CandidateList& candidates,
                                                std::span<const double> weights,
                                                std::size_t k, Rng& rng) {
  detail::check_k(candidates, k);
  detail::check_weights(candidates, weights);
  std::vector<std::size_t> pool(candidates.size());
  std::iota(pool.begin(), pool.end(), 0);
  return detail::make_neighbour_set(
      candidates, weighted_sample_without_replacement(weights, pool, k, rng),
      k);
}

// Members above sim_k + lambda are kept, members below sim_k - lambda are
// dropped, and the rest of the k slots are drawn from the band in between.
inline NeighbourSet select_pncf(const CandidateList& candidates,
                                std::span<const double> weights, std::size_t k,
                                double lambda, double sim_k, Rng& rng) {
  detail::check_k(candidates, k);
  detail::check_weights(candidates, weights);
  require(lambda >= 0, "lambda must be >= 0");

  std::vector<std::size_t> picked;
  std::vector<std::size_t> band;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double s = candidates[i].similarity;
    if (s > sim_k + lambda && picked.size() < k) {
      picked.push_back(i);
    } else if (s >= sim_k - lambda) {
      band.push_back(i);
    }
  }
  const std::size_t missing = k - picked.size();
  require(band.size() >= missing,
          "truncation band holds too few candidates to reach k");
  auto drawn = weighted_sample_without_replacement(weights, band, missing, rng);
  picked.insert(picked.end(), drawn.begin(), drawn.end());
  return detail::make_neighbour_set(candidates, std::move(picked), k);
}

// Per-partition quotas ceil(p (1-p)^(i-1) k), truncated so the running total
// stops at k-1. If the first quota already reaches k, the allocation is the
// single quota k. Stops after `partition_count` partitions even when the
// total is short; select_ppns rejects such allocations.
inline std::vector<std::size_t> geometric_allocation(std::size_t k, double p,
                                                     std::size_t partition_count) {
  require(p > 0 && p <= 1, "p must lie in (0, 1]");
  require(k >= 1, "k must be >= 1");
  require(partition_count >= 1, "need at least one partition");
  const double kd = static_cast<double>(k);
  const std::size_t first = detail::ceil_quota(p * kd);
  if (first >= k) return {k};

  std::vector<std::size_t> quotas;
  std::size_t total = 0;
  for (std::size_t i = 1; i <= partition_count && total < k - 1; ++i) {
    const double share = p * std::pow(1.0 - p, static_cast<double>(i - 1)) * kd;
    const std::size_t q = std::min(detail::ceil_quota(share), k - 1 - total);
    quotas.push_back(q);
    total += q;
  }
  return quotas;
}

inline double ppns_security_cap(std::size_t k) {
  return static_cast<double>(k - 1) / static_cast<double>(k);
}

// Partitioned probabilistic neighbour selection. Partition i contributes its
// quota by weighted sampling inside the partition; the final member is one
// weighted draw over every candidate in the partitions never visited.
inline NeighbourSet select_ppns(const CandidateList& candidates,
                                std::span<const double> weights, std::size_t k,
                                double p, Rng& rng) {
  detail::check_k(candidates, k);
  detail::check_weights(candidates, weights);
  const Partitioning parts = partition_candidates(candidates.size(), k);
  const auto quotas = geometric_allocation(k, p, parts.count());

  if (quotas.size() == 1 && quotas[0] == k) {
    std::vector<std::size_t> picked(k);
    std::iota(picked.begin(), picked.end(), 0);
    return detail::make_neighbour_set(candidates, std::move(picked), k);
  }

  require(candidates.size() >= 2 * k,
          "partitioned selection needs n >= 2k candidates");
  const std::size_t allocated =
      std::accumulate(quotas.begin(), quotas.end(), std::size_t{0});
  require(allocated == k - 1 && quotas.size() < parts.count(),
          "p=" + std::to_string(p) + " is too small: quotas do not reach k-1 " +
              "before the last partition");

  std::vector<std::size_t> picked;
  picked.reserve(k);
  std::vector<std::size_t> pool;
  for (std::size_t i = 1; i <= quotas.size(); ++i) {
    pool.resize(parts.end(i) - parts.begin(i));
    std::iota(pool.begin(), pool.end(), parts.begin(i));
    require(quotas[i - 1] <= pool.size(), "quota exceeds partition size");
    auto drawn = weighted_sample_without_replacement(weights, pool,
                                                     quotas[i - 1], rng);
    picked.insert(picked.end(), drawn.begin(), drawn.end());
  }
  pool.resize(candidates.size() - parts.end(quotas.size()));
  std::iota(pool.begin(), pool.end(), parts.end(quotas.size()));
  auto last = weighted_sample_without_replacement(weights, pool, 1, rng);
  picked.push_back(last.front());
  return detail::make_neighbour_set(candidates, std::move(picked), k);
}

}  // namespace ppns

#endif  // PPNS_SELECTION_HPP_
