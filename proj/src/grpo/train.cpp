// SPDX-License-Identifier: Apache-2.0
#include "pear/grpo/train.hpp"

#include <ostream>

#include "json.hpp"
#include "pear/error.hpp"
#include "pear/kernels/kernels.hpp"
#include "pear/log.hpp"
#include "pear/parallel.hpp"

namespace pear {

std::string to_json_line(const StepMetrics& m) {
  // ordered_json keeps the field order stable in the output file
  const nlohmann::ordered_json j = {{"step", m.step},
                                    {"reward_mean", m.reward_mean},
                                    {"acc", m.acc},
                                    {"len_mean", m.len_mean},
                                    {"len_think_mean", m.len_think_mean},
                                    {"len_answer_mean", m.len_answer_mean},
                                    {"h_think_mean", m.h_think_mean},
                                    {"h_answer_mean", m.h_answer_mean},
                                    {"kl_mean", m.kl_mean},
                                    {"clip_frac", m.clip_frac}};
  return j.dump();
}

Task training_task(std::span<const int> difficulties, std::uint64_t seed,
                   std::size_t step, std::size_t index, const Vocab& vocab) {
  if (difficulties.empty()) throw std::invalid_argument("no difficulties given");
  Rng rng(derive_seed(seed, {1, step, index}));
  const int d = difficulties[rng.below(difficulties.size())];
  return generate_task(d, rng, vocab);
}

namespace {

StepMetrics summarize(std::size_t step, std::span<const Group> groups) {
  StepMetrics m;
  m.step = step;
  double n = 0.0;
  for (const Group& g : groups) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const PhaseEntropy& pe = g.phases[i];
      m.reward_mean += g.rewards[i];
      m.acc += g.verdicts[i].correct() ? 1.0 : 0.0;
      m.len_mean += static_cast<double>(g.rollouts[i].response.length());
      m.len_think_mean += static_cast<double>(pe.think_len);
      m.len_answer_mean += static_cast<double>(pe.answer_len);
      m.h_think_mean += pe.h_think;
      m.h_answer_mean += pe.h_answer;
      n += 1.0;
    }
  }
  for (double* x : {&m.reward_mean, &m.acc, &m.len_mean, &m.len_think_mean,
                    &m.len_answer_mean, &m.h_think_mean, &m.h_answer_mean}) {
    *x /= n;
  }
  return m;
}

void write_audit(std::ostream& out, std::span<const Group> groups) {
  for (const Group& g : groups) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      out << to_json_line(RewardAudit{g.verdicts[i].kind, g.phases[i].h_think,
                                      g.phases[i].h_answer, g.penalties[i], g.rewards[i]})
          << '\n';
    }
  }
}

}  // namespace

TrainResult train_loop(const PolicyParams& init, std::span<const int> difficulties,
                       const RewardFn& reward_fn, const TrainConfig& cfg,
                       const SamplerConfig& sampler_cfg, const TrainSinks& sinks) {
  cfg.validate();
  sampler_cfg.validate();
  reward_fn.cfg.validate();
  const PolicyParams ref = snapshot(init);
  PolicyParams live = snapshot(init);
  std::vector<double> velocity(live.weights().size(), 0.0);
  TrainResult res{live, {}};

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const PolicyParams old = snapshot(live);
    std::vector<Group> groups(cfg.batch_prompts);
    parallel_for(groups.size(), cfg.workers, [&](std::size_t j) {
      const Task task = training_task(difficulties, cfg.seed, step, j, old.vocab());
      groups[j] = collect_group(old, task, cfg, sampler_cfg, reward_fn,
                                derive_seed(cfg.seed, {2, step, j}));
    });

    StepMetrics m = summarize(step, groups);
    double clip = 0.0;
    for (std::size_t e = 0; e < cfg.inner_epochs; ++e) {
      const ObjectiveResult obj = objective_and_grad(live, groups, ref, cfg, sampler_cfg);
      if (e == 0) m.kl_mean = obj.kl_mean;
      clip += obj.clip_frac;
      for (std::size_t k = 0; k < velocity.size(); ++k) {
        velocity[k] = cfg.momentum * velocity[k] + obj.grad[k];
      }
      kernels::axpy(cfg.learning_rate, velocity, live.mutable_weights());
      if (!live.all_finite()) throw NumericalError("non-finite weights after update");
    }
    m.clip_frac = clip / static_cast<double>(cfg.inner_epochs);
    live.set_version(live.version() + 1);

    spdlog::debug("step {} reward {:.4f} acc {:.3f} len {:.2f} h_think {:.4f}", step,
                  m.reward_mean, m.acc, m.len_mean, m.h_think_mean);
    if (sinks.metrics) *sinks.metrics << to_json_line(m) << '\n';
    if (sinks.audit) write_audit(*sinks.audit, groups);
    res.metrics.push_back(m);
  }
  res.params = std::move(live);
  return res;
}

}  // namespace pear
