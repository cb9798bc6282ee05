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

#ifndef PPNS_SAMPLING_HPP_
#define PPNS_SAMPLING_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ppns/types.hpp"

namespace ppns {

// Sequential weighted sampling without replacement: each draw picks a
// remaining element with probability weight / (sum of remaining weights).
// Returns the chosen entries of `pool` in draw order.
inline std::vector<std::size_t> weighted_sample_without_replacement(
    std::span<const double> weights, std::span<const std::size_t> pool,
    std::size_t draws, Rng& rng) {
  require(draws <= pool.size(), "more draws than pool members");
  std::vector<std::size_t> remaining(pool.begin(), pool.end());
  std::vector<double> w;
  w.reserve(pool.size());
  for (std::size_t idx : pool) {
    require(idx < weights.size(), "pool index out of range");
    require(weights[idx] > 0, "weights must be positive");
    w.push_back(weights[idx]);
  }

  std::vector<std::size_t> chosen;
  chosen.reserve(draws);
  for (std::size_t d = 0; d < draws; ++d) {
    double total = 0;
    for (double x : w) total += x;
    const double target = uniform01(rng) * total;
    std::size_t pick = w.size() - 1;
    double acc = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      acc += w[j];
      if (target < acc) {
        pick = j;
        break;
      }
    }
    chosen.push_back(remaining[pick]);
    // Swap-remove; the scan order of later draws does not affect their law.
    remaining[pick] = remaining.back();
    remaining.pop_back();
    w[pick] = w.back();
    w.pop_back();
  }
  return chosen;
}

}  // namespace ppns

#endif  // PPNS_SAMPLING_HPP_
