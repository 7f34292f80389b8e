// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "pear/reward/reward.hpp"

namespace pear {

struct TrainConfig {
  std::size_t group_size = 8;
  double clip_eps = 0.2;
  double kl_beta = 1e-3;
  double learning_rate = 0.3;
  double std_eps = 1e-6;
  std::size_t batch_prompts = 16;
  std::size_t steps = 100;
  std::uint64_t seed = 0;
  // Optimizer passes over each collected batch.
  std::size_t inner_epochs = 1;
  // Heavy-ball coefficient; 0 is plain gradient ascent.
  double momentum = 0.0;
  std::size_t workers = 1;

  // Throws ConfigError.
  void validate() const;
};

enum class RewardKind { kPear, kBinary };

std::string_view to_string(RewardKind kind);
// "pear" or "binary"; throws ConfigError otherwise.
RewardKind parse_reward_kind(const std::string& name);

struct RewardFn {
  RewardKind kind = RewardKind::kPear;
  RewardConfig cfg;

  double penalty(const PhaseEntropy& pe) const;
  double operator()(const Verdict& verdict, const PhaseEntropy& pe) const;
};

}  // namespace pear
