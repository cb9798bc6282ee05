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

// Sparse user x item star ratings in MovieLens u.data layout.

#ifndef PPNS_DATASET_HPP_
#define PPNS_DATASET_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppns/types.hpp"

namespace ppns {

struct ItemRating {
  ItemId item;
  int rating;

  friend bool operator==(const ItemRating&, const ItemRating&) = default;
};

struct UserRating {
  UserId user;
  int rating;

  friend bool operator==(const UserRating&, const UserRating&) = default;
};

struct RatingTriple {
  UserId user;
  ItemId item;
  int rating;

  friend bool operator==(const RatingTriple&, const RatingTriple&) = default;
};

// A held-out (user, item, rating) observation to be predicted.
struct TestPoint {
  UserId user;
  ItemId item;
  int true_rating;

  friend bool operator==(const TestPoint&, const TestPoint&) = default;
};

// One forged or injected user: an id plus its ratings.
struct UserProfile {
  UserId user;
  std::vector<ItemRating> ratings;
};

// Immutable rating matrix. Rows and columns are shared between copies, so
// masking one entry or injecting a few users costs O(users + items) pointer
// copies rather than a full rebuild.
class RatingMatrix {
 public:
  RatingMatrix() = default;

  // Validates ranges and (user, item) uniqueness.
  static RatingMatrix from_triples(std::vector<RatingTriple> triples) {
    for (const auto& t : triples) {
      require(valid_stars(t.rating),
              "rating " + std::to_string(t.rating) + " for (" +
                  std::to_string(raw(t.user)) + "," +
                  std::to_string(raw(t.item)) + ") outside 1-5");
    }
    std::sort(triples.begin(), triples.end(), [](const auto& a, const auto& b) {
      return std::pair(a.user, a.item) < std::pair(b.user, b.item);
    });
    for (std::size_t i = 1; i < triples.size(); ++i) {
      if (triples[i].user == triples[i - 1].user &&
          triples[i].item == triples[i - 1].item) {
        throw Error(Errc::kInvalidArgument,
                    "duplicate rating for (" +
                        std::to_string(raw(triples[i].user)) + "," +
                        std::to_string(raw(triples[i].item)) + ")");
      }
    }

    RatingMatrix m;
    std::map<ItemId, std::vector<UserRating>> columns;
    std::size_t i = 0;
    while (i < triples.size()) {
      const UserId u = triples[i].user;
      Profile profile;
      for (; i < triples.size() && triples[i].user == u; ++i) {
        profile.push_back({triples[i].item, triples[i].rating});
        columns[triples[i].item].push_back({u, triples[i].rating});
      }
      m.users_.push_back(u);
      m.rows_.push_back(make_row(std::move(profile)));
    }
    for (auto& [item, raters] : columns) {
      m.items_.push_back(item);
      m.columns_.push_back(
          std::make_shared<const std::vector<UserRating>>(std::move(raters)));
    }
    m.recount();
    return m;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::size_t user_count() const { return users_.size(); }
  std::size_t item_count() const { return items_.size(); }

  const std::vector<UserId>& user_ids() const { return users_; }
  const std::vector<ItemId>& item_ids() const { return items_; }

  bool has_user(UserId u) const { return find_user(u).has_value(); }
  bool has_item(ItemId i) const { return find_item(i).has_value(); }

  // Ratings of one user, ascending by item id.
  std::span<const ItemRating> profile(UserId u) const {
    return *row(u).profile;
  }

  // Users who rated the item, ascending by user id. Empty for unknown items.
  std::span<const UserRating> raters(ItemId i) const {
    auto idx = find_item(i);
    if (!idx) return {};
    return *columns_[*idx];
  }

  std::optional<int> rating(UserId u, ItemId i) const {
    auto idx = find_user(u);
    if (!idx) return std::nullopt;
    const Profile& p = *rows_[*idx].profile;
    auto it = std::lower_bound(
        p.begin(), p.end(), i,
        [](const ItemRating& r, ItemId item) { return r.item < item; });
    if (it == p.end() || it->item != i) return std::nullopt;
    return it->rating;
  }

  double user_mean(UserId u) const {
    const Row& r = row(u);
    return r.sum / static_cast<double>(r.profile->size());
  }

  // Euclidean norm of the user's full rating vector (missing entries are 0).
  double profile_norm(UserId u) const { return std::sqrt(row(u).sum_sq); }
  double profile_sum_sq(UserId u) const { return row(u).sum_sq; }

  double global_mean() const {
    require(size_ > 0, "global mean of an empty matrix");
    return static_cast<double>(total_) / static_cast<double>(size_);
  }

  // Every entry, ordered by (user, item).
  std::vector<RatingTriple> entries() const {
    std::vector<RatingTriple> out;
    out.reserve(size_);
    for (std::size_t u = 0; u < users_.size(); ++u) {
      for (const auto& r : *rows_[u].profile) {
        out.push_back({users_[u], r.item, r.rating});
      }
    }
    return out;
  }

  // Copy with one rating removed. A user or item left without ratings is
  // dropped so the id sets keep covering exactly the stored keys.
  RatingMatrix without(UserId u, ItemId i) const {
    auto ui = find_user(u);
    auto ii = find_item(i);
    require(ui && ii && rating(u, i).has_value(),
            "cannot mask missing rating (" + std::to_string(raw(u)) + "," +
                std::to_string(raw(i)) + ")",
            Errc::kNotFound);
    RatingMatrix m = *this;
    Profile profile;
    for (const auto& r : *rows_[*ui].profile) {
      if (r.item != i) profile.push_back(r);
    }
    if (profile.empty()) {
      m.users_.erase(m.users_.begin() + static_cast<std::ptrdiff_t>(*ui));
      m.rows_.erase(m.rows_.begin() + static_cast<std::ptrdiff_t>(*ui));
    } else {
      m.rows_[*ui] = make_row(std::move(profile));
    }
    std::vector<UserRating> column;
    for (const auto& r : *columns_[*ii]) {
      if (r.user != u) column.push_back(r);
    }
    if (column.empty()) {
      m.items_.erase(m.items_.begin() + static_cast<std::ptrdiff_t>(*ii));
      m.columns_.erase(m.columns_.begin() + static_cast<std::ptrdiff_t>(*ii));
    } else {
      m.columns_[*ii] =
          std::make_shared<const std::vector<UserRating>>(std::move(column));
    }
    m.recount();
    return m;
  }

  // Copy extended by new users. Ids must be fresh; ratings must be valid.
  RatingMatrix with_profiles(std::span<const UserProfile> profiles) const {
    std::vector<UserId> fresh;
    for (const auto& p : profiles) {
      require(!has_user(p.user), "user id " + std::to_string(raw(p.user)) +
                                     " already exists");
      require(!p.ratings.empty(), "profile for user " +
                                      std::to_string(raw(p.user)) +
                                      " has no ratings");
      fresh.push_back(p.user);
    }
    std::sort(fresh.begin(), fresh.end());
    require(std::adjacent_find(fresh.begin(), fresh.end()) == fresh.end(),
            "injected profiles reuse a user id");

    RatingMatrix m = *this;
    std::map<ItemId, std::vector<UserRating>> additions;
    for (const auto& p : profiles) {
      Profile profile = p.ratings;
      std::sort(profile.begin(), profile.end(),
                [](const auto& a, const auto& b) { return a.item < b.item; });
      for (std::size_t j = 0; j < profile.size(); ++j) {
        require(valid_stars(profile[j].rating),
                "rating " + std::to_string(profile[j].rating) + " for user " +
                    std::to_string(raw(p.user)) + " outside 1-5");
        require(j == 0 || profile[j].item != profile[j - 1].item,
                "duplicate item in profile of user " +
                    std::to_string(raw(p.user)));
        additions[profile[j].item].push_back({p.user, profile[j].rating});
      }
      auto pos = std::lower_bound(m.users_.begin(), m.users_.end(), p.user);
      auto offset = pos - m.users_.begin();
      m.users_.insert(pos, p.user);
      m.rows_.insert(m.rows_.begin() + offset, make_row(std::move(profile)));
    }
    for (auto& [item, added] : additions) {
      auto pos = std::lower_bound(m.items_.begin(), m.items_.end(), item);
      auto offset = pos - m.items_.begin();
      std::vector<UserRating> column;
      if (pos != m.items_.end() && *pos == item) {
        column = *m.columns_[static_cast<std::size_t>(offset)];
      }
      column.insert(column.end(), added.begin(), added.end());
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.user < b.user; });
      auto shared =
          std::make_shared<const std::vector<UserRating>>(std::move(column));
      if (pos != m.items_.end() && *pos == item) {
        m.columns_[static_cast<std::size_t>(offset)] = std::move(shared);
      } else {
        m.items_.insert(pos, item);
        m.columns_.insert(m.columns_.begin() + offset, std::move(shared));
      }
    }
    m.recount();
    return m;
  }

  friend bool operator==(const RatingMatrix& a, const RatingMatrix& b) {
    if (a.users_ != b.users_ || a.items_ != b.items_) return false;
    for (std::size_t u = 0; u < a.rows_.size(); ++u) {
      if (*a.rows_[u].profile != *b.rows_[u].profile) return false;
    }
    return true;
  }

 private:
  using Profile = std::vector<ItemRating>;

  struct Row {
    std::shared_ptr<const Profile> profile;
    double sum = 0;
    double sum_sq = 0;
  };

  static Row make_row(Profile profile) {
    Row r;
    for (const auto& e : profile) {
      r.sum += e.rating;
      r.sum_sq += static_cast<double>(e.rating) * e.rating;
    }
    r.profile = std::make_shared<const Profile>(std::move(profile));
    return r;
  }

  void recount() {
    size_ = 0;
    total_ = 0;
    for (const auto& r : rows_) {
      size_ += r.profile->size();
      total_ += static_cast<long long>(r.sum);
    }
  }

  std::optional<std::size_t> find_user(UserId u) const {
    auto it = std::lower_bound(users_.begin(), users_.end(), u);
    if (it == users_.end() || *it != u) return std::nullopt;
    return static_cast<std::size_t>(it - users_.begin());
  }

  std::optional<std::size_t> find_item(ItemId i) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), i);
    if (it == items_.end() || *it != i) return std::nullopt;
    return static_cast<std::size_t>(it - items_.begin());
  }

  const Row& row(UserId u) const {
    auto idx = find_user(u);
    if (!idx) {
      throw Error(Errc::kNotFound,
                  "unknown user " + std::to_string(raw(u)));
    }
    return rows_[*idx];
  }

  std::vector<UserId> users_;
  std::vector<Row> rows_;
  std::vector<ItemId> items_;
  std::vector<std::shared_ptr<const std::vector<UserRating>>> columns_;
  std::size_t size_ = 0;
  long long total_ = 0;
};

namespace detail {

inline bool parse_int(std::string_view field, long long& out) {
  if (field.empty()) return false;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& why) {
  throw Error(Errc::kParse, "line " + std::to_string(line) + ": " + why);
}

}  // namespace detail

// Reads `user<TAB>item<TAB>rating<TAB>timestamp` lines. The timestamp is
// validated as an integer and discarded. Blank lines are skipped.
inline RatingMatrix parse_ratings(std::istream& in) {
  std::vector<RatingTriple> triples;
  std::map<std::pair<UserId, ItemId>, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 4) {
      detail::parse_fail(line_no, "expected 4 tab-separated fields, got " +
                                      std::to_string(fields.size()));
    }
    long long user = 0, item = 0, stars = 0, timestamp = 0;
    if (!detail::parse_int(fields[0], user)) {
      detail::parse_fail(line_no, "bad user id '" + std::string(fields[0]) + "'");
    }
    if (!detail::parse_int(fields[1], item)) {
      detail::parse_fail(line_no, "bad item id '" + std::string(fields[1]) + "'");
    }
    if (!detail::parse_int(fields[2], stars)) {
      detail::parse_fail(line_no, "bad rating '" + std::string(fields[2]) + "'");
    }
    if (!detail::parse_int(fields[3], timestamp)) {
      detail::parse_fail(line_no,
                         "bad timestamp '" + std::string(fields[3]) + "'");
    }
    if (!valid_stars(stars)) {
      detail::parse_fail(line_no, "rating " + std::to_string(stars) +
                                      " outside 1-5");
    }
    auto key = std::pair(UserId{user}, ItemId{item});
    auto [it, inserted] = seen.emplace(key, line_no);
    if (!inserted) {
      detail::parse_fail(line_no, "duplicate rating for (" +
                                      std::to_string(user) + "," +
                                      std::to_string(item) + "), first at line " +
                                      std::to_string(it->second));
    }
    triples.push_back({UserId{user}, ItemId{item}, static_cast<int>(stars)});
  }
  if (triples.empty()) throw Error(Errc::kParse, "empty rating stream");
  return RatingMatrix::from_triples(std::move(triples));
}

// Writes u.data lines with a zero timestamp.
inline void serialize_ratings(const RatingMatrix& matrix, std::ostream& out) {
  for (const auto& t : matrix.entries()) {
    out << raw(t.user) << '\t' << raw(t.item) << '\t' << t.rating << "\t0\n";
  }
}

inline TestPoint sample_test_point(std::span<const RatingTriple> entries,
                                   Rng& rng) {
  require(!entries.empty(), "cannot sample a test point from an empty matrix");
  const auto& t = entries[uniform_index(rng, entries.size())];
  return {t.user, t.item, t.rating};
}

// `count` independent uniform draws over existing entries (with replacement).
inline std::vector<TestPoint> holdout_points(const RatingMatrix& matrix,
                                             std::size_t count,
                                             std::uint64_t seed) {
  require(!matrix.empty(), "holdout from an empty matrix");
  require(count >= 1, "holdout count must be positive");
  const auto entries = matrix.entries();
  Rng rng(seed);
  std::vector<TestPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(sample_test_point(entries, rng));
  }
  return out;
}

inline RatingMatrix inject_profiles(const RatingMatrix& matrix,
                                    std::span<const UserProfile> profiles) {
  return matrix.with_profiles(profiles);
}

}  // namespace ppns

#endif  // PPNS_DATASET_HPP_
