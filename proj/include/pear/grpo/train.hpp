// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pear/grpo/objective.hpp"

namespace pear {

struct StepMetrics {
  std::size_t step = 0;
  double reward_mean = 0.0;
  double acc = 0.0;
  double len_mean = 0.0;
  double len_think_mean = 0.0;
  double len_answer_mean = 0.0;
  double h_think_mean = 0.0;
  double h_answer_mean = 0.0;
  double kl_mean = 0.0;
  double clip_frac = 0.0;

  friend bool operator==(const StepMetrics&, const StepMetrics&) = default;
};

std::string to_json_line(const StepMetrics& m);

// Training prompt j of step s: difficulty drawn uniformly from `difficulties`
// under derive_seed(seed, {1, s, j}).
Task training_task(std::span<const int> difficulties, std::uint64_t seed,
                   std::size_t step, std::size_t index, const Vocab& vocab);

struct TrainSinks {
  std::ostream* metrics = nullptr;  // one StepMetrics line per step
  std::ostream* audit = nullptr;    // one RewardAudit line per response
};

struct TrainResult {
  PolicyParams params;
  std::vector<StepMetrics> metrics;
};

// GRPO from `init`, which also serves as the fixed KL reference. Each step
// freezes a snapshot, collects batch_prompts groups from it, normalizes
// advantages within each group, and takes inner_epochs ascent steps.
TrainResult train_loop(const PolicyParams& init, std::span<const int> difficulties,
                       const RewardFn& reward_fn, const TrainConfig& cfg,
                       const SamplerConfig& sampler_cfg, const TrainSinks& sinks = {});

}  // namespace pear
