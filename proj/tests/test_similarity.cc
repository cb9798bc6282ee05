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

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ppns/similarity.hpp"

namespace ppns {
namespace {

RatingMatrix make(std::vector<RatingTriple> t) {
  return RatingMatrix::from_triples(std::move(t));
}

const UserId u1{1}, u2{2}, u3{3};

TEST(CoratedItems, Cases) {
  const auto m = make({{u1, ItemId{1}, 3}, {u1, ItemId{2}, 3},
                       {u1, ItemId{3}, 3}, {u2, ItemId{2}, 1},
                       {u2, ItemId{3}, 1}, {u2, ItemId{4}, 1},
                       {u3, ItemId{9}, 2}});
  EXPECT_EQ(corated_items(m, u1, u2), (std::vector<ItemId>{ItemId{2}, ItemId{3}}));
  EXPECT_TRUE(corated_items(m, u1, u3).empty());
  EXPECT_THROW(corated_items(m, u1, u1), Error);
  EXPECT_THROW(corated_items(m, u1, UserId{77}), Error);
}

TEST(Cosine, SpecExamples) {
  // Profiles equal to their co-rated parts, so both cosine forms agree.
  const auto m = make({{u1, ItemId{1}, 1}, {u1, ItemId{2}, 2},
                       {u2, ItemId{1}, 2}, {u2, ItemId{2}, 1},
                       {u3, ItemId{1}, 3}, {u3, ItemId{2}, 3}});
  for (Metric metric : {Metric::kCosine, Metric::kCosineCorated}) {
    EXPECT_NEAR(similarity(m, u1, u2, metric), 0.8, 1e-15);
    EXPECT_NEAR(similarity(m, u3, u3, metric), 1.0, 1e-15);
  }
  const auto disjoint = make({{u1, ItemId{1}, 5}, {u2, ItemId{2}, 5}});
  EXPECT_EQ(cosine_similarity(disjoint, u1, u2), 0.0);
  EXPECT_EQ(corated_cosine_similarity(disjoint, u1, u2), 0.0);
}

TEST(Cosine, FullProfileNormsMatchDenseVectors) {
  const auto m = testing::random_matrix(25, 30, 0.3, 17);
  for (UserId a : m.user_ids()) {
    for (UserId b : m.user_ids()) {
      if (a == b) continue;
      EXPECT_NEAR(cosine_similarity(m, a, b), testing::dense_cosine(m, a, b),
                  1e-12);
    }
  }
}

TEST(Cosine, CoratedFormIgnoresOtherItems) {
  const auto m = make({{u1, ItemId{1}, 1}, {u1, ItemId{2}, 2},
                       {u1, ItemId{3}, 5}, {u2, ItemId{1}, 2},
                       {u2, ItemId{2}, 1}});
  EXPECT_NEAR(corated_cosine_similarity(m, u1, u2), 0.8, 1e-15);
  EXPECT_NEAR(cosine_similarity(m, u1, u2), 4.0 / std::sqrt(30.0 * 5.0),
              1e-15);
}

TEST(Pearson, SpecExamples) {
  // Means over whole profiles: u1 mean 3, u2 mean 3, u3 mean 3.
  const auto m = make({{u1, ItemId{1}, 1}, {u1, ItemId{2}, 5},
                       {u2, ItemId{1}, 2}, {u2, ItemId{2}, 4},
                       {u3, ItemId{1}, 5}, {u3, ItemId{2}, 1}});
  EXPECT_NEAR(pearson_similarity(m, u1, u2), 1.0, 1e-12);
  EXPECT_NEAR(pearson_similarity(m, u1, u3), -1.0, 1e-12);
  const auto flat = make({{u1, ItemId{1}, 3}, {u1, ItemId{2}, 3},
                          {u2, ItemId{1}, 2}, {u2, ItemId{2}, 4}});
  EXPECT_EQ(pearson_similarity(flat, u1, u2), 0.0);
  const auto disjoint = make({{u1, ItemId{1}, 1}, {u1, ItemId{3}, 5},
                              {u2, ItemId{2}, 4}, {u2, ItemId{4}, 1}});
  EXPECT_EQ(pearson_similarity(disjoint, u1, u2), 0.0);
}

TEST(Similarity, SymmetricAndBounded) {
  const auto m = testing::random_matrix(30, 25, 0.25, 8);
  for (UserId a : m.user_ids()) {
    for (UserId b : m.user_ids()) {
      if (a == b) continue;
      for (Metric metric :
           {Metric::kCosine, Metric::kCosineCorated, Metric::kPearson}) {
        const double s = similarity(m, a, b, metric);
        EXPECT_EQ(s, similarity(m, b, a, metric));
        if (metric == Metric::kPearson) {
          EXPECT_GE(s, -1.0 - 1e-12);
        } else {
          EXPECT_GE(s, 0.0);
        }
        EXPECT_LE(s, 1.0 + 1e-12);
      }
    }
  }
}

TEST(Similarity, ScaleInvariant) {
  // Doubling every rating of both users (1,2 -> 2,4) leaves cosine alone.
  const auto small = make({{u1, ItemId{1}, 1}, {u1, ItemId{2}, 2},
                           {u1, ItemId{3}, 1}, {u2, ItemId{1}, 2},
                           {u2, ItemId{2}, 1}, {u2, ItemId{4}, 2}});
  const auto big = make({{u1, ItemId{1}, 2}, {u1, ItemId{2}, 4},
                         {u1, ItemId{3}, 2}, {u2, ItemId{1}, 4},
                         {u2, ItemId{2}, 2}, {u2, ItemId{4}, 4}});
  for (Metric metric : {Metric::kCosine, Metric::kCosineCorated}) {
    EXPECT_NEAR(similarity(small, u1, u2, metric),
                similarity(big, u1, u2, metric), 1e-12);
  }
}

TEST(CandidateList, SortedWithTieRule) {
  // Target u1; u3 and u4 tie, u2 is highest.
  const UserId u4{4};
  const auto m = make({{u1, ItemId{1}, 5}, {u1, ItemId{2}, 1},
                       {u2, ItemId{1}, 5}, {u2, ItemId{2}, 1},
                       {u4, ItemId{1}, 1}, {u4, ItemId{2}, 5},
                       {u3, ItemId{1}, 1}, {u3, ItemId{2}, 5}});
  const auto list = candidate_list(m, u1);
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0].user, u2);
  EXPECT_EQ(list[1].user, u3);
  EXPECT_EQ(list[2].user, u4);
  EXPECT_EQ(list[1].similarity, list[2].similarity);
}

TEST(CandidateList, PermutationOfOtherUsers) {
  const auto m = testing::random_matrix(60, 40, 0.15, 31);
  const auto list = candidate_list(m, UserId{7}, Metric::kPearson);
  EXPECT_EQ(list.size(), m.user_count() - 1);
  std::set<UserId> seen;
  for (std::size_t r = 0; r < list.size(); ++r) {
    EXPECT_NE(list[r].user, UserId{7});
    seen.insert(list[r].user);
    if (r > 0) {
      EXPECT_TRUE(list[r - 1].similarity > list[r].similarity ||
                  (list[r - 1].similarity == list[r].similarity &&
                   list[r - 1].user < list[r].user));
    }
  }
  EXPECT_EQ(seen.size(), list.size());
}

TEST(CandidateList, Errors) {
  const auto single = make({{u1, ItemId{1}, 3}});
  EXPECT_THROW(candidate_list(single, u1), Error);
  EXPECT_THROW(candidate_list(single, u2), Error);
}

TEST(CandidateList, CsvRoundTrip) {
  const auto m = testing::random_matrix(12, 10, 0.4, 2);
  const auto list = candidate_list(m, UserId{1});
  std::ostringstream out;
  write_candidates_csv(list, out);
  EXPECT_EQ(out.str().substr(0, 23), "rank,user_id,similarity");
  std::istringstream in(out.str());
  const auto back = read_candidates_csv(in);
  ASSERT_EQ(back.size(), list.size());
  for (std::size_t r = 0; r < list.size(); ++r) {
    EXPECT_EQ(back[r].user, list[r].user);
    EXPECT_NEAR(back[r].similarity, list[r].similarity, 5e-7);
  }
  std::istringstream bare("0.2\n0.9\n0.5\n");
  const auto plain = read_candidates_csv(bare);
  EXPECT_EQ(plain[0].similarity, 0.9);
  EXPECT_EQ(plain[2].similarity, 0.2);
  std::istringstream junk("1,2\n");
  EXPECT_THROW(read_candidates_csv(junk), Error);
}

TEST(Metric, Names) {
  for (Metric m : {Metric::kCosine, Metric::kCosineCorated, Metric::kPearson}) {
    EXPECT_EQ(parse_metric(to_string(m)), m);
  }
  EXPECT_THROW(parse_metric("jaccard"), Error);
}

}  // namespace
}  // namespace ppns
