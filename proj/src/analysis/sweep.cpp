// SPDX-License-Identifier: Apache-2.0
#include <fmt/format.h>

#include "pear/analysis/analysis.hpp"

namespace pear {

namespace {

SweepRow run_one(const PolicyParams& base, std::span<const Task> eval_tasks,
                 const SweepConfig& cfg, const RewardFn& reward_fn, std::string label) {
  const TrainResult trained =
      train_loop(base, cfg.train_difficulties, reward_fn, cfg.train, cfg.sampler);
  const auto episodes =
      rollout_episodes(trained.params, eval_tasks, cfg.sampler, cfg.eval_seed, cfg.train.workers);
  SweepRow row;
  row.label = std::move(label);
  row.reward = reward_fn.kind;
  row.alpha = reward_fn.cfg.alpha;
  for (const Episode& e : episodes) {
    row.accuracy += e.stats.verdict == VerdictKind::kCorrect ? 1.0 : 0.0;
    row.mean_len += static_cast<double>(e.stats.length);
    row.h_think += e.stats.h_think;
    row.h_answer += e.stats.h_answer;
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, episodes.size()));
  row.accuracy /= n;
  row.mean_len /= n;
  row.h_think /= n;
  row.h_answer /= n;
  return row;
}

}  // namespace

std::vector<SweepRow> alpha_sweep(const PolicyParams& base, std::span<const Task> eval_tasks,
                                  const SweepConfig& cfg) {
  std::vector<SweepRow> rows;
  for (double alpha : cfg.alphas) {
    RewardFn fn{RewardKind::kPear, cfg.reward};
    fn.cfg.alpha = alpha;
    rows.push_back(run_one(base, eval_tasks, cfg, fn, fmt::format("alpha={}", alpha)));
  }
  if (cfg.include_binary) {
    rows.push_back(run_one(base, eval_tasks, cfg, RewardFn{RewardKind::kBinary, cfg.reward},
                           "binary"));
  }
  return rows;
}

}  // namespace pear
