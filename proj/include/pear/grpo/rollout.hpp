// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "pear/env/env.hpp"
#include "pear/grpo/config.hpp"
#include "pear/policy/sampler.hpp"

namespace pear {

// G responses to one prompt, sampled from a frozen snapshot. Log-probs and
// entropies inside each rollout are those of the snapshot.
struct Group {
  Task task;
  std::vector<Rollout> rollouts;
  std::vector<Verdict> verdicts;
  std::vector<PhaseEntropy> phases;
  std::vector<double> penalties;
  std::vector<double> rewards;
  std::vector<double> advantages;

  std::size_t size() const { return rollouts.size(); }
};

// Response i is drawn with SampleStreams::from_seed(derive_seed(seed, {i})).
Group collect_group(const PolicyParams& policy_old, const Task& task,
                    const TrainConfig& cfg, const SamplerConfig& sampler_cfg,
                    const RewardFn& reward_fn, std::uint64_t seed);

// pi_live / pi_old for the token at `position` of response `index`, with
// the log-prob convention of sampler_cfg. Throws NumericalError if the
// result is not finite.
double importance_ratio(const PolicyParams& policy_live, const Group& group,
                        std::size_t index, std::size_t position,
                        const SamplerConfig& sampler_cfg);

}  // namespace pear
