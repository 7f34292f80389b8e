// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "pear/grpo/rollout.hpp"

namespace pear {

// min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A).
double clipped_term(double ratio, double advantage, double clip_eps);

// sum_v p_v ln(p_v / q_v). Throws std::invalid_argument on a size mismatch
// or when q is zero where p is positive.
double kl_categorical(std::span<const double> p, std::span<const double> q);

// Exact KL(pi_live || pi_ref) of the temperature-1 next-token distributions.
double kl_term(const PolicyParams& policy_live, const PolicyParams& policy_ref,
               std::span<const TokenId> context);

struct ObjectiveResult {
  double objective = 0.0;
  std::vector<double> grad;  // ascent direction, same layout as the weights
  double kl_mean = 0.0;      // per generated token
  double clip_frac = 0.0;    // tokens whose clipped branch is selected
  std::size_t tokens = 0;
};

// Mean over groups of (1/G) sum_i (1/|o_i|) sum_t [clipped_term - beta * KL]
// and its exact gradient. Per-group partial sums are formed on up to
// cfg.workers threads and then added in group order. Throws NumericalError
// on any non-finite intermediate.
ObjectiveResult objective_and_grad(const PolicyParams& policy_live,
                                   std::span<const Group> groups,
                                   const PolicyParams& policy_ref,
                                   const TrainConfig& cfg,
                                   const SamplerConfig& sampler_cfg);

}  // namespace pear
