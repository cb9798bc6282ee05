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

// User-user similarity and similarity-sorted candidate lists.

#ifndef PPNS_SIMILARITY_HPP_
#define PPNS_SIMILARITY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ppns/dataset.hpp"
#include "ppns/types.hpp"

namespace ppns {

// kCosine uses each user's whole rating vector for the norms (unrated items
// count as 0); kCosineCorated restricts the norms to co-rated items.
enum class Metric { kCosine, kCosineCorated, kPearson };

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kCosine:
      return "cosine";
    case Metric::kCosineCorated:
      return "cosine-corated";
    case Metric::kPearson:
      return "pearson";
  }
  return "?";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "cosine") return Metric::kCosine;
  if (name == "cosine-corated") return Metric::kCosineCorated;
  if (name == "pearson") return Metric::kPearson;
  throw Error(Errc::kInvalidArgument,
              "unknown metric '" + std::string(name) + "'");
}

struct Candidate {
  UserId user;
  double similarity;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Every non-target user, by similarity descending then user id ascending.
struct CandidateList {
  UserId target{};
  Metric metric = Metric::kCosine;
  std::vector<Candidate> entries;

  std::size_t size() const { return entries.size(); }
  const Candidate& operator[](std::size_t rank0) const {
    return entries[rank0];
  }
};

namespace detail {

// Calls f(item, r_i, r_j) for each co-rated item, ascending by item id.
template <typename F>
void for_each_corated(std::span<const ItemRating> a,
                      std::span<const ItemRating> b, F&& f) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->item < ib->item) {
      ++ia;
    } else if (ib->item < ia->item) {
      ++ib;
    } else {
      f(ia->item, ia->rating, ib->rating);
      ++ia;
      ++ib;
    }
  }
}

inline void require_user(const RatingMatrix& m, UserId u) {
  if (!m.has_user(u)) {
    throw Error(Errc::kNotFound, "unknown user " + std::to_string(raw(u)));
  }
}

}  // namespace detail

inline std::vector<ItemId> corated_items(const RatingMatrix& m, UserId i,
                                         UserId j) {
  require(i != j, "co-rated items need two distinct users");
  detail::require_user(m, i);
  detail::require_user(m, j);
  std::vector<ItemId> out;
  detail::for_each_corated(m.profile(i), m.profile(j),
                           [&](ItemId s, int, int) { out.push_back(s); });
  return out;
}

inline double cosine_similarity(const RatingMatrix& m, UserId i, UserId j) {
  detail::require_user(m, i);
  detail::require_user(m, j);
  double dot = 0;
  std::size_t shared = 0;
  detail::for_each_corated(m.profile(i), m.profile(j),
                           [&](ItemId, int ri, int rj) {
                             dot += static_cast<double>(ri) * rj;
                             ++shared;
                           });
  if (shared == 0) return 0.0;
  return std::min(1.0, dot / (m.profile_norm(i) * m.profile_norm(j)));
}

inline double corated_cosine_similarity(const RatingMatrix& m, UserId i,
                                        UserId j) {
  detail::require_user(m, i);
  detail::require_user(m, j);
  double dot = 0, sq_i = 0, sq_j = 0;
  std::size_t shared = 0;
  detail::for_each_corated(m.profile(i), m.profile(j),
                           [&](ItemId, int ri, int rj) {
                             dot += static_cast<double>(ri) * rj;
                             sq_i += static_cast<double>(ri) * ri;
                             sq_j += static_cast<double>(rj) * rj;
                             ++shared;
                           });
  if (shared == 0) return 0.0;
  return std::min(1.0, dot / (std::sqrt(sq_i) * std::sqrt(sq_j)));
}

// Means are over each user's whole profile; sums over co-rated items.
inline double pearson_similarity(const RatingMatrix& m, UserId i, UserId j) {
  detail::require_user(m, i);
  detail::require_user(m, j);
  const double mean_i = m.user_mean(i);
  const double mean_j = m.user_mean(j);
  double num = 0, dev_i = 0, dev_j = 0;
  std::size_t shared = 0;
  detail::for_each_corated(m.profile(i), m.profile(j),
                           [&](ItemId, int ri, int rj) {
                             const double di = ri - mean_i;
                             const double dj = rj - mean_j;
                             num += di * dj;
                             dev_i += di * di;
                             dev_j += dj * dj;
                             ++shared;
                           });
  if (shared == 0 || dev_i == 0 || dev_j == 0) return 0.0;
  return std::clamp(num / std::sqrt(dev_i * dev_j), -1.0, 1.0);
}

inline double similarity(const RatingMatrix& m, UserId i, UserId j,
                         Metric metric) {
  switch (metric) {
    case Metric::kCosine:
      return cosine_similarity(m, i, j);
    case Metric::kCosineCorated:
      return corated_cosine_similarity(m, i, j);
    case Metric::kPearson:
      return pearson_similarity(m, i, j);
  }
  throw Error(Errc::kInvalidArgument, "unknown metric");
}

inline void sort_candidates(std::vector<Candidate>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.similarity != b.similarity) {
                return a.similarity > b.similarity;
              }
              return a.user < b.user;
            });
}

inline CandidateList candidate_list(const RatingMatrix& m, UserId target,
                                    Metric metric = Metric::kCosine) {
  detail::require_user(m, target);
  require(m.user_count() >= 2,
          "candidate list needs at least one user besides the target");
  CandidateList list;
  list.target = target;
  list.metric = metric;
  list.entries.reserve(m.user_count() - 1);
  for (UserId u : m.user_ids()) {
    if (u == target) continue;
    list.entries.push_back({u, similarity(m, target, u, metric)});
  }
  sort_candidates(list.entries);
  return list;
}

// CSV with header `rank,user_id,similarity`; rank is 1-based.
inline void write_candidates_csv(const CandidateList& list, std::ostream& out) {
  out << "rank,user_id,similarity\n";
  char buf[64];
  for (std::size_t r = 0; r < list.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.6f", list[r].similarity);
    out << (r + 1) << ',' << raw(list[r].user) << ',' << buf << '\n';
  }
}

// Reads either the CSV above or bare similarity values, one per line. Rows
// are re-sorted, so the result obeys the candidate-list ordering.
inline CandidateList read_candidates_csv(std::istream& in) {
  CandidateList list;
  std::string line;
  std::size_t line_no = 0;
  std::int64_t next_id = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("rank", 0) == 0) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    try {
      if (cells.size() == 3) {
        list.entries.push_back(
            {UserId{std::stoll(cells[1])}, std::stod(cells[2])});
      } else if (cells.size() == 1) {
        list.entries.push_back({UserId{next_id++}, std::stod(cells[0])});
      } else {
        throw std::invalid_argument("field count");
      }
    } catch (const std::exception&) {
      throw Error(Errc::kParse, "line " + std::to_string(line_no) +
                                    ": expected rank,user_id,similarity");
    }
  }
  require(!list.entries.empty(), "no similarities read", Errc::kParse);
  sort_candidates(list.entries);
  return list;
}

}  // namespace ppns

#endif  // PPNS_SIMILARITY_HPP_
