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

#ifndef PPNS_PREDICTION_HPP_
#define PPNS_PREDICTION_HPP_

#include <cmath>

#include "ppns/dataset.hpp"
#include "ppns/selection.hpp"
#include "ppns/types.hpp"

namespace ppns {

enum class PredictionSource { kNeighbours, kUserMean, kGlobalMean };

struct Prediction {
  UserId user;
  ItemId item;
  double value;
  std::size_t neighbours_used;
  PredictionSource source;
};

// sum(sim * r) / sum(|sim|) over members that rated the item. Members without
// a rating are skipped. With no contributors (or a zero denominator) the
// target's mean is used, then the global mean if the target is unknown.
inline Prediction predict_rating(const RatingMatrix& matrix,
                                 const NeighbourSet& neighbours, ItemId item) {
  require(!neighbours.members.empty(), "prediction needs neighbours");
  double num = 0;
  double den = 0;
  std::size_t used = 0;
  for (const auto& m : neighbours.members) {
    auto r = matrix.rating(m.user, item);
    if (!r) continue;
    num += m.similarity * *r;
    den += std::abs(m.similarity);
    ++used;
  }
  if (used > 0 && den > 0) {
    return {neighbours.target, item, num / den, used,
            PredictionSource::kNeighbours};
  }
  if (matrix.has_user(neighbours.target)) {
    return {neighbours.target, item, matrix.user_mean(neighbours.target), used,
            PredictionSource::kUserMean};
  }
  return {neighbours.target, item, matrix.global_mean(), used,
          PredictionSource::kGlobalMean};
}

}  // namespace ppns

#endif  // PPNS_PREDICTION_HPP_
