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

// Sybil-style kNN attack: the attacker clones m of the target's ratings into
// beta * k fake users and hopes each fake's neighbour set is the other fakes
// plus the target, so that recommendations relay the target's ratings.

#ifndef PPNS_ATTACK_HPP_
#define PPNS_ATTACK_HPP_

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "ppns/dataset.hpp"
#include "ppns/pipeline.hpp"
#include "ppns/types.hpp"

namespace ppns {

struct AttackConfig {
  UserId target{};
  std::size_t m = 8;                  // ratings the attacker already knows
  std::size_t budget_multiplier = 1;  // beta: fakes injected = beta * k
  PipelineParams strategy;
  std::size_t trials = 1;
  std::uint64_t seed = 1;

  void validate(const RatingMatrix& matrix) const {
    require(trials >= 1, "attack needs at least one trial");
    require(budget_multiplier >= 1, "budget multiplier must be >= 1");
    require(m >= 1, "the attacker must know at least one rating");
    require(matrix.has_user(target), "attack target is not in the matrix",
            Errc::kNotFound);
    require(m <= matrix.profile(target).size(),
            "target profile is smaller than m");
  }
};

struct AttackReport {
  double exposure_rate = 0;
  double full_reconstruction_rate = 0;
  std::size_t trials = 0;
};

// `count` identical profiles copying the same m randomly chosen ratings of
// the target. Ids continue after the largest id in the matrix.
inline std::vector<UserProfile> forge_profiles(const RatingMatrix& matrix,
                                               UserId target, std::size_t m,
                                               std::size_t count,
                                               std::uint64_t seed) {
  require(count >= 1, "forge count must be >= 1");
  require(matrix.has_user(target), "attack target is not in the matrix",
          Errc::kNotFound);
  const auto profile = matrix.profile(target);
  require(m >= 1 && m <= profile.size(), "target profile is smaller than m");

  Rng rng(seed);
  std::vector<ItemRating> known(profile.begin(), profile.end());
  // Partial Fisher-Yates keeps the choice independent of library shuffles.
  for (std::size_t i = 0; i < m; ++i) {
    std::swap(known[i], known[i + uniform_index(rng, known.size() - i)]);
  }
  known.resize(m);
  std::sort(known.begin(), known.end(),
            [](const ItemRating& a, const ItemRating& b) {
              return raw(a.item) < raw(b.item);
            });

  const std::int64_t first = raw(matrix.user_ids().back()) + 1;
  std::vector<UserProfile> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    out.push_back({UserId{first + static_cast<std::int64_t>(c)}, known});
  }
  return out;
}

inline AttackReport run_attack(const RatingMatrix& matrix,
                               const AttackConfig& config) {
  config.validate(matrix);
  const std::size_t fakes = config.budget_multiplier * config.strategy.k;
  std::size_t exposed = 0;
  std::size_t reconstructed = 0;
  for (std::size_t t = 0; t < config.trials; ++t) {
    Rng forge_rng = derive_rng(config.seed, {0, t});
    const auto profiles =
        forge_profiles(matrix, config.target, config.m, fakes, forge_rng());
    const RatingMatrix injected = inject_profiles(matrix, profiles);

    std::unordered_set<std::int64_t> conspirators;
    for (const auto& p : profiles) conspirators.insert(raw(p.user));
    conspirators.insert(raw(config.target));

    const UserId observer = profiles.front().user;
    const TrialContext ctx = prepare_trial(injected, observer, config.strategy);
    Rng rng = derive_rng(config.seed, {1, t});
    const NeighbourSet chosen = select_neighbours(ctx, config.strategy, rng);

    bool has_target = false;
    bool only_conspirators = true;
    for (const auto& n : chosen.members) {
      has_target = has_target || n.user == config.target;
      only_conspirators = only_conspirators && conspirators.contains(raw(n.user));
    }
    exposed += has_target;
    reconstructed += has_target && only_conspirators;
  }
  const double trials = static_cast<double>(config.trials);
  return {exposed / trials, reconstructed / trials, config.trials};
}

// A small matrix on which the attack ranking is known in closed form. The
// target (id 1) rates items 1..2m; `honest` other users rate only items from
// 1001 on, so they share nothing with the fakes. A fake's list is then the
// other fakes at similarity 1, the target strictly between 0 and 1, and the
// honest users at 0.
inline RatingMatrix attack_toy_matrix(std::size_t m, std::size_t honest,
                                      std::uint64_t seed = 7) {
  require(m >= 1, "m must be >= 1");
  require(honest >= 1, "need at least one honest user");
  std::vector<RatingTriple> triples;
  for (std::size_t i = 1; i <= 2 * m; ++i) {
    triples.push_back({UserId{1}, ItemId{static_cast<std::int64_t>(i)},
                       static_cast<int>(i % kMaxStars) + kMinStars});
  }
  Rng rng(seed);
  constexpr std::size_t kItemsPerUser = 20;
  constexpr std::size_t kItemPool = 200;
  for (std::size_t u = 0; u < honest; ++u) {
    std::vector<std::size_t> pool(kItemPool);
    for (std::size_t i = 0; i < kItemPool; ++i) pool[i] = i;
    for (std::size_t i = 0; i < kItemsPerUser; ++i) {
      std::swap(pool[i], pool[i + uniform_index(rng, kItemPool - i)]);
      triples.push_back(
          {UserId{static_cast<std::int64_t>(u + 2)},
           ItemId{static_cast<std::int64_t>(1001 + pool[i])},
           static_cast<int>(uniform_index(rng, kMaxStars)) + kMinStars});
    }
  }
  return RatingMatrix::from_triples(std::move(triples));
}

}  // namespace ppns

#endif  // PPNS_ATTACK_HPP_
