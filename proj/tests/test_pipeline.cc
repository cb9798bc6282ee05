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

#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ppns/pipeline.hpp"

namespace ppns {
namespace {

PipelineParams params(Strategy s, double p = 0.5, std::size_t k = 10) {
  PipelineParams out;
  out.strategy = s;
  out.p = p;
  out.k = k;
  return out;
}

TEST(Pipeline, PpnsAtOneMatchesKnn) {
  const auto m = testing::random_matrix(80, 60, 0.2, 21, 3);
  for (UserId u : {UserId{1}, UserId{40}, UserId{80}}) {
    const auto ctx = prepare_trial(m, u, params(Strategy::kPpns, 1.0));
    Rng a(1), b(2);
    const auto knn = recommend(m, ctx, params(Strategy::kKnn), ItemId{5}, a);
    const auto ppns =
        recommend(m, ctx, params(Strategy::kPpns, 1.0), ItemId{5}, b);
    EXPECT_EQ(knn.neighbours, ppns.neighbours);
    EXPECT_EQ(knn.prediction.value, ppns.prediction.value);
  }
}

TEST(Pipeline, SensitivityOnlyWhenNeeded) {
  const auto m = testing::random_matrix(30, 30, 0.3, 2);
  EXPECT_EQ(prepare_trial(m, UserId{1}, params(Strategy::kKnn)).rs, 1.0);
  auto fixed = params(Strategy::kPpns);
  fixed.rs_override = 0.25;
  EXPECT_EQ(prepare_trial(m, UserId{1}, fixed).rs, 0.25);
  EXPECT_EQ(prepare_trial(m, UserId{1}, params(Strategy::kNpns)).rs,
            target_sensitivity(m, UserId{1}, Metric::kCosine));
  auto removal = params(Strategy::kNpns);
  removal.route = SensitivityRoute::kRemoval;
  EXPECT_EQ(prepare_trial(m, UserId{1}, removal).rs,
            target_sensitivity(m, UserId{1}, Metric::kCosine,
                               SensitivityRoute::kRemoval));
}

TEST(Pipeline, PncfNoiseOnSelectedMembers) {
  const auto m = testing::random_matrix(60, 40, 0.25, 5, 3);
  const auto p = params(Strategy::kPncf);
  const auto ctx = prepare_trial(m, UserId{3}, p);
  Rng a(9);
  const auto noisy = select_neighbours(ctx, p, a);
  ASSERT_EQ(noisy.members.size(), 10u);
  int changed = 0;
  for (const auto& n : noisy.members) {
    EXPECT_EQ(ctx.candidates[n.rank - 1].user, n.user);
    changed += ctx.candidates[n.rank - 1].similarity != n.similarity;
  }
  EXPECT_EQ(changed, 10);

  auto all = p;
  all.pncf_noise = NoiseScope::kAll;
  Rng b(9);
  const auto spread = select_neighbours(ctx, all, b);
  EXPECT_EQ(spread.members.size(), 10u);
}

TEST(Pipeline, Deterministic) {
  const auto m = testing::random_matrix(60, 40, 0.25, 6, 3);
  for (Strategy s :
       {Strategy::kKnn, Strategy::kNpns, Strategy::kPncf, Strategy::kPpns}) {
    const auto p = params(s);
    const auto ctx = prepare_trial(m, UserId{2}, p);
    Rng a(4), b(4);
    const auto x = recommend(m, ctx, p, ItemId{3}, a);
    const auto y = recommend(m, ctx, p, ItemId{3}, b);
    EXPECT_EQ(x.neighbours, y.neighbours);
    EXPECT_EQ(x.prediction.value, y.prediction.value);
  }
}

TEST(Pipeline, Names) {
  EXPECT_EQ(parse_noise_scope("all"), NoiseScope::kAll);
  EXPECT_EQ(parse_noise_scope("selected"), NoiseScope::kSelected);
  EXPECT_THROW(parse_noise_scope("some"), Error);
  EXPECT_EQ(parse_sensitivity_route("eq3"),
            SensitivityRoute::kRecommendationAware);
  EXPECT_EQ(parse_sensitivity_route("removal"), SensitivityRoute::kRemoval);
  EXPECT_THROW(parse_sensitivity_route("max"), Error);
}

}  // namespace
}  // namespace ppns
