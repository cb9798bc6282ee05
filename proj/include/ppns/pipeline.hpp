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

// One recommendation for one target: candidate list, sensitivity, weights,
// neighbour selection and the rating prediction.

#ifndef PPNS_PIPELINE_HPP_
#define PPNS_PIPELINE_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppns/dataset.hpp"
#include "ppns/prediction.hpp"
#include "ppns/privacy.hpp"
#include "ppns/selection.hpp"
#include "ppns/similarity.hpp"
#include "ppns/types.hpp"

namespace ppns {

// Where the PNCF baseline adds Laplace noise to similarities: to the k
// selected members before aggregation, or to every candidate before
// selection.
enum class NoiseScope { kSelected, kAll };

inline NoiseScope parse_noise_scope(std::string_view name) {
  if (name == "selected") return NoiseScope::kSelected;
  if (name == "all") return NoiseScope::kAll;
  throw Error(Errc::kInvalidArgument,
              "unknown noise scope '" + std::string(name) + "'");
}

inline SensitivityRoute parse_sensitivity_route(std::string_view name) {
  if (name == "eq3" || name == "recommendation-aware") {
    return SensitivityRoute::kRecommendationAware;
  }
  if (name == "removal") return SensitivityRoute::kRemoval;
  throw Error(Errc::kInvalidArgument,
              "unknown sensitivity route '" + std::string(name) + "'");
}

struct PipelineParams {
  Strategy strategy = Strategy::kPpns;
  std::size_t k = 50;
  double p = 0.5;
  double epsilon = 1.0;
  double rho = 0.5;
  std::optional<double> rs_override;
  Metric metric = Metric::kCosine;
  SensitivityRoute route = SensitivityRoute::kRecommendationAware;
  NoiseScope pncf_noise = NoiseScope::kSelected;

  PrivacyParams privacy(double rs) const {
    PrivacyParams pp;
    pp.epsilon = epsilon;
    pp.k = static_cast<int>(k);
    pp.rs = rs;
    pp.rho = rho;
    pp.rs_override = rs_override;
    return pp;
  }
};

inline bool is_randomised(Strategy s) { return s != Strategy::kKnn; }

// Strategy-independent state of one trial.
struct TrialContext {
  CandidateList candidates;
  double rs = 1.0;  // per-target sensitivity, or the override
};

inline TrialContext prepare_trial(const RatingMatrix& matrix, UserId target,
                                  Metric metric,
                                  std::optional<double> rs_override,
                                  SensitivityRoute route, bool need_rs) {
  TrialContext ctx;
  ctx.candidates = candidate_list(matrix, target, metric);
  if (rs_override) {
    ctx.rs = *rs_override;
  } else if (need_rs) {
    ctx.rs = target_sensitivity(matrix, target, metric, route);
  }
  return ctx;
}

inline TrialContext prepare_trial(const RatingMatrix& matrix, UserId target,
                                  const PipelineParams& params) {
  return prepare_trial(matrix, target, params.metric, params.rs_override,
                       params.route, is_randomised(params.strategy));
}

namespace detail {

inline NeighbourSet select_on(const CandidateList& candidates,
                              const PipelineParams& params, double rs,
                              Rng& rng) {
  switch (params.strategy) {
    case Strategy::kKnn:
      return select_topk(candidates, params.k);
    case Strategy::kNpns:
      return select_global_probabilistic(
          candidates, selection_weights(candidates, params.privacy(rs)),
          params.k, rng);
    case Strategy::kPpns:
      return select_ppns(candidates,
                         selection_weights(candidates, params.privacy(rs)),
                         params.k, params.p, rng);
    case Strategy::kPncf: {
      const auto privacy = params.privacy(rs);
      require(candidates.size() > params.k,
              "truncated selection needs more candidates than k");
      const double sim_k = candidates[params.k - 1].similarity;
      const double lambda = compute_lambda(std::clamp(sim_k, 0.0, 1.0),
                                           candidates.size(), privacy);
      return select_pncf(candidates, selection_weights(candidates, privacy),
                         params.k, lambda, sim_k, rng);
    }
  }
  throw Error(Errc::kInvalidArgument, "unknown strategy");
}

}  // namespace detail

// Runs the configured strategy. PNCF additionally perturbs similarities with
// Laplace noise of scale RS / epsilon, so its returned members carry the
// noisy values used by the prediction.
inline NeighbourSet select_neighbours(const TrialContext& ctx,
                                      const PipelineParams& params, Rng& rng) {
  const double rs = params.rs_override.value_or(ctx.rs);
  if (params.strategy != Strategy::kPncf) {
    return detail::select_on(ctx.candidates, params, rs, rng);
  }
  if (params.pncf_noise == NoiseScope::kAll) {
    CandidateList noisy = ctx.candidates;
    for (auto& c : noisy.entries) {
      c.similarity = laplace_noise(c.similarity, rs, params.epsilon, rng);
    }
    sort_candidates(noisy.entries);
    return detail::select_on(noisy, params, rs, rng);
  }
  NeighbourSet out = detail::select_on(ctx.candidates, params, rs, rng);
  for (auto& m : out.members) {
    m.similarity = laplace_noise(m.similarity, rs, params.epsilon, rng);
  }
  return out;
}

struct Recommendation {
  NeighbourSet neighbours;
  Prediction prediction;
};

inline Recommendation recommend(const RatingMatrix& matrix,
                                const TrialContext& ctx,
                                const PipelineParams& params, ItemId item,
                                Rng& rng) {
  Recommendation r{select_neighbours(ctx, params, rng), {}};
  r.prediction = predict_rating(matrix, r.neighbours, item);
  return r;
}

}  // namespace ppns

#endif  // PPNS_PIPELINE_HPP_
