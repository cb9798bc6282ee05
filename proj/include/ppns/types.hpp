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

#ifndef PPNS_TYPES_HPP_
#define PPNS_TYPES_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppns {

// Ids are opaque integers; the enum keeps users and items from mixing.
enum class UserId : std::int64_t {};
enum class ItemId : std::int64_t {};

constexpr std::int64_t raw(UserId id) { return static_cast<std::int64_t>(id); }
constexpr std::int64_t raw(ItemId id) { return static_cast<std::int64_t>(id); }

inline constexpr int kMinStars = 1;
inline constexpr int kMaxStars = 5;

constexpr bool valid_stars(long long r) {
  return r >= kMinStars && r <= kMaxStars;
}

enum class Errc {
  kInvalidArgument,
  kParse,
  kNotFound,
  kUnattainable,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool condition, const std::string& message,
                    Errc code = Errc::kInvalidArgument) {
  if (!condition) throw Error(code, message);
}

// All randomness flows through explicitly passed engines.
using Rng = std::mt19937_64;

// Deterministic child engine for (master seed, stream indices). std::seed_seq
// has a fully specified mixing algorithm, so the mapping is portable.
inline Rng derive_rng(std::uint64_t master,
                      std::initializer_list<std::uint64_t> streams) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * streams.size());
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master);
  for (std::uint64_t s : streams) push(s);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng);
}

}  // namespace ppns

#endif  // PPNS_TYPES_HPP_
