// SPDX-License-Identifier: Apache-2.0
#include "pear/grpo/rollout.hpp"

#include <cmath>

#include "pear/error.hpp"
#include "pear/grpo/advantage.hpp"

namespace pear {

void TrainConfig::validate() const {
  if (group_size < 2) throw ConfigError("train.group_size must be >= 2");
  if (!(clip_eps > 0.0 && clip_eps < 1.0)) throw ConfigError("train.clip_eps must be in (0, 1)");
  if (!(kl_beta >= 0.0)) throw ConfigError("train.kl_beta must be >= 0");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("train.learning_rate must be finite and >= 0");
  }
  if (!(std_eps > 0.0)) throw ConfigError("train.std_eps must be > 0");
  if (batch_prompts == 0) throw ConfigError("train.batch_prompts must be positive");
  if (inner_epochs == 0) throw ConfigError("train.inner_epochs must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("train.momentum must be in [0, 1)");
  if (workers == 0) throw ConfigError("train.workers must be positive");
}

std::string_view to_string(RewardKind kind) {
  return kind == RewardKind::kPear ? "pear" : "binary";
}

RewardKind parse_reward_kind(const std::string& name) {
  if (name == "pear") return RewardKind::kPear;
  if (name == "binary") return RewardKind::kBinary;
  throw ConfigError("unknown reward '" + name + "' (expected pear or binary)");
}

double RewardFn::penalty(const PhaseEntropy& pe) const {
  return kind == RewardKind::kPear ? phase_penalty(pe, cfg.alpha) : 0.0;
}

double RewardFn::operator()(const Verdict& verdict, const PhaseEntropy& pe) const {
  return kind == RewardKind::kPear ? pear_reward(verdict, pe, cfg) : binary_reward(verdict);
}

Group collect_group(const PolicyParams& policy_old, const Task& task,
                    const TrainConfig& cfg, const SamplerConfig& sampler_cfg,
                    const RewardFn& reward_fn, std::uint64_t seed) {
  const Vocab& vocab = policy_old.vocab();
  Group g;
  g.task = task;
  for (std::size_t i = 0; i < cfg.group_size; ++i) {
    auto streams = SampleStreams::from_seed(derive_seed(seed, {i}));
    Rollout r = sample_response(policy_old, task.prompt_tokens, sampler_cfg, streams);
    const PhaseEntropy pe = phase_entropies(r.response, r.entropies);
    const Verdict v = verify(r.response, task, vocab);
    g.penalties.push_back(reward_fn.penalty(pe));
    g.rewards.push_back(reward_fn(v, pe));
    g.verdicts.push_back(v);
    g.phases.push_back(pe);
    g.rollouts.push_back(std::move(r));
  }
  g.advantages = normalize_advantages(g.rewards, cfg.std_eps);
  return g;
}

double importance_ratio(const PolicyParams& policy_live, const Group& group,
                        std::size_t index, std::size_t position,
                        const SamplerConfig& sampler_cfg) {
  const Rollout& r = group.rollouts.at(index);
  if (position >= r.log_probs.size()) throw std::out_of_range("no recorded log-prob");
  const TokenId token = r.response.generated()[position];
  const double lp = ratio_log_prob(policy_live, r.features[position], r.masks[position],
                                   token, sampler_cfg);
  const double ratio = std::exp(lp - r.log_probs[position]);
  if (!std::isfinite(ratio)) throw NumericalError("non-finite importance ratio");
  return ratio;
}

}  // namespace pear
