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
#include <map>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ppns/dataset.hpp"

namespace ppns {
namespace {

RatingMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return parse_ratings(in);
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(ParseRatings, SingleLine) {
  const auto m = parse("1\t50\t5\t874965758\n");
  EXPECT_EQ(m.size(), 1u);
  EXPECT_EQ(m.rating(UserId{1}, ItemId{50}), 5);
  EXPECT_FALSE(m.rating(UserId{1}, ItemId{51}).has_value());
}

TEST(ParseRatings, TrailingNewlineOptionalAndCrlf) {
  const auto a = parse("1\t2\t3\t0\n4\t5\t1\t0");
  const auto b = parse("1\t2\t3\t0\r\n4\t5\t1\t0\r\n");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.user_count(), 2u);
}

TEST(ParseRatings, RatingOutOfRangeReportsLine) {
  EXPECT_NE(parse_error("1\t50\t9\t0\n").find("line 1"), std::string::npos);
  EXPECT_NE(parse_error("1\t1\t3\t0\n1\t2\t0\t0\n").find("line 2"),
            std::string::npos);
}

TEST(ParseRatings, DuplicatePairRejected) {
  const auto msg = parse_error("1\t2\t3\t0\n2\t2\t3\t0\n1\t2\t4\t0\n");
  EXPECT_NE(msg.find("line 3"), std::string::npos);
  EXPECT_NE(msg.find("duplicate"), std::string::npos);
}

TEST(ParseRatings, MalformedLines) {
  EXPECT_NE(parse_error("1\t2\t3\n").find("line 1"), std::string::npos);
  EXPECT_NE(parse_error("1\t2\t3\t0\nx\t2\t3\t0\n").find("line 2"),
            std::string::npos);
  EXPECT_NE(parse_error("1\t2\t3.5\t0\n").find("line 1"), std::string::npos);
}

TEST(ParseRatings, EmptyStreamIsError) {
  try {
    parse("");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kParse);
  }
  EXPECT_THROW(parse("\n\n"), Error);
}

TEST(ParseRatings, RoundTrip) {
  const auto m = testing::random_matrix(30, 40, 0.2, 5);
  std::ostringstream out;
  serialize_ratings(m, out);
  const auto again = parse(out.str());
  EXPECT_EQ(m, again);
  std::ostringstream out2;
  serialize_ratings(again, out2);
  EXPECT_EQ(out.str(), out2.str());
}

TEST(RatingMatrix, IdSetsCoverKeys) {
  const auto m = testing::random_matrix(20, 15, 0.3, 9);
  std::size_t total = 0;
  for (UserId u : m.user_ids()) {
    EXPECT_FALSE(m.profile(u).empty());
    total += m.profile(u).size();
  }
  EXPECT_EQ(total, m.size());
  total = 0;
  for (ItemId i : m.item_ids()) {
    EXPECT_FALSE(m.raters(i).empty());
    total += m.raters(i).size();
  }
  EXPECT_EQ(total, m.size());
  EXPECT_TRUE(std::is_sorted(m.user_ids().begin(), m.user_ids().end()));
}

TEST(RatingMatrix, WithoutMasksOneEntry) {
  const auto m = parse("1\t1\t5\t0\n1\t2\t3\t0\n2\t1\t4\t0\n");
  const auto masked = m.without(UserId{1}, ItemId{1});
  EXPECT_EQ(masked.size(), 2u);
  EXPECT_FALSE(masked.rating(UserId{1}, ItemId{1}).has_value());
  EXPECT_EQ(masked.rating(UserId{2}, ItemId{1}), 4);
  EXPECT_EQ(m.size(), 3u);  // original untouched
  EXPECT_DOUBLE_EQ(masked.user_mean(UserId{1}), 3.0);

  const auto dropped = masked.without(UserId{1}, ItemId{2});
  EXPECT_FALSE(dropped.has_user(UserId{1}));
  EXPECT_FALSE(dropped.has_item(ItemId{2}));
  EXPECT_THROW(m.without(UserId{2}, ItemId{2}), Error);
}

TEST(HoldoutPoints, SingleRatingForced) {
  const auto m = parse("3\t7\t2\t0\n");
  const auto pts = holdout_points(m, 3, 123);
  ASSERT_EQ(pts.size(), 3u);
  for (const auto& p : pts) EXPECT_EQ(p, (TestPoint{UserId{3}, ItemId{7}, 2}));
}

TEST(HoldoutPoints, DeterministicAndValid) {
  const auto m = testing::random_matrix(50, 50, 0.2, 1);
  const auto a = holdout_points(m, 1000, 42);
  const auto b = holdout_points(m, 1000, 42);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, holdout_points(m, 1000, 43));
  for (const auto& p : a) {
    ASSERT_TRUE(m.rating(p.user, p.item).has_value());
    EXPECT_EQ(*m.rating(p.user, p.item), p.true_rating);
    EXPECT_GE(p.true_rating, 1);
    EXPECT_LE(p.true_rating, 5);
  }
}

TEST(HoldoutPoints, Errors) {
  EXPECT_THROW(holdout_points(RatingMatrix{}, 1, 1), Error);
  EXPECT_THROW(holdout_points(parse("1\t1\t1\t0\n"), 0, 1), Error);
}

// Pearson chi-square over 10 equally likely entries; 9 degrees of freedom.
TEST(HoldoutPoints, UniformOverEntries) {
  const auto m = parse(
      "1\t1\t1\t0\n1\t2\t2\t0\n1\t3\t3\t0\n2\t1\t4\t0\n2\t4\t5\t0\n"
      "3\t2\t1\t0\n3\t5\t2\t0\n4\t1\t3\t0\n4\t6\t4\t0\n5\t7\t5\t0\n");
  constexpr int kDraws = 50000;
  const auto pts = holdout_points(m, kDraws, 2024);
  std::map<std::pair<std::int64_t, std::int64_t>, int> counts;
  for (const auto& p : pts) ++counts[{raw(p.user), raw(p.item)}];
  ASSERT_EQ(counts.size(), 10u);
  const double expected = kDraws / 10.0;
  double chi2 = 0;
  for (const auto& [key, c] : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 21.67);  // 99th percentile of chi-square(9)
}

TEST(InjectProfiles, IntoEmptyMatrix) {
  const std::vector<UserProfile> fakes = {
      {UserId{9}, {{ItemId{1}, 4}, {ItemId{2}, 5}}}};
  const auto m = inject_profiles(RatingMatrix{}, fakes);
  EXPECT_EQ(m.user_count(), 1u);
  EXPECT_EQ(m.size(), 2u);
}

TEST(InjectProfiles, CountsAndNoMutation) {
  const auto base = testing::random_matrix(40, 30, 0.2, 3);
  const auto copy = base;
  std::vector<UserProfile> fakes;
  for (int f = 0; f < 50; ++f) {
    fakes.push_back({UserId{1000 + f}, {{ItemId{1}, 3}, {ItemId{99}, 5}}});
  }
  const auto injected = inject_profiles(base, fakes);
  EXPECT_EQ(injected.user_count(), base.user_count() + 50);
  EXPECT_EQ(injected.size(), base.size() + 100);
  EXPECT_EQ(base, copy);
  EXPECT_TRUE(injected.has_item(ItemId{99}));
  EXPECT_EQ(injected.raters(ItemId{99}).size(), 50u);
}

TEST(InjectProfiles, Errors) {
  const auto base = parse("1\t1\t3\t0\n");
  const std::vector<UserProfile> collide = {{UserId{1}, {{ItemId{2}, 3}}}};
  EXPECT_THROW(inject_profiles(base, collide), Error);
  const std::vector<UserProfile> bad = {{UserId{2}, {{ItemId{2}, 6}}}};
  EXPECT_THROW(inject_profiles(base, bad), Error);
  const std::vector<UserProfile> twice = {{UserId{2}, {{ItemId{2}, 3}}},
                                          {UserId{2}, {{ItemId{3}, 3}}}};
  EXPECT_THROW(inject_profiles(base, twice), Error);
}

}  // namespace
}  // namespace ppns
