// SPDX-License-Identifier: Apache-2.0
#include "pear/grpo/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pear/error.hpp"
#include "pear/kernels/kernels.hpp"
#include "pear/parallel.hpp"

namespace pear {

double clipped_term(double ratio, double advantage, double clip_eps) {
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  return std::min(ratio * advantage, clipped * advantage);
}

double kl_categorical(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distribution size mismatch");
  double kl = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (p[v] <= 0.0) continue;
    if (q[v] <= 0.0) throw std::invalid_argument("reference assigns zero mass");
    kl += p[v] * std::log(p[v] / q[v]);
  }
  return kl;
}

double kl_term(const PolicyParams& policy_live, const PolicyParams& policy_ref,
               std::span<const TokenId> context) {
  if (!(policy_live.vocab() == policy_ref.vocab())) {
    throw std::invalid_argument("policies use different vocabularies");
  }
  const auto p = distribution(policy_live, context, 1.0);
  const auto q = distribution(policy_ref, context, 1.0);
  return kl_categorical(p.probs(), q.probs());
}

namespace {

struct Partial {
  double objective = 0.0;
  double kl = 0.0;
  std::size_t clipped = 0;
  std::size_t tokens = 0;
  std::vector<double> grad;
};

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericalError(std::string("non-finite ") + what);
}

Partial group_partial(const PolicyParams& live, const Group& group,
                      const PolicyParams& ref, const TrainConfig& cfg,
                      const SamplerConfig& sampler_cfg, double group_weight) {
  const std::size_t v = live.vocab_size();
  const double ratio_temp = sampler_cfg.ratio_on_sampling_dist ? sampler_cfg.temperature : 1.0;
  Partial out;
  out.grad.assign(live.weights().size(), 0.0);
  std::vector<double> z_live(v), z_ref(v), p_ratio(v), p_live(v), p_ref(v), dir(v);

  const double g = static_cast<double>(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    const Rollout& r = group.rollouts[i];
    const auto tokens = r.response.generated();
    const double w = group_weight / (g * static_cast<double>(tokens.size()));
    const double adv = group.advantages[i];
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const FeatureSet& fs = r.features[t];
      const TokenId tok = tokens[t];
      logits_into(live, fs, z_live);

      masked_softmax_into(z_live, ratio_temp, r.masks[t], p_ratio);
      const double lp = std::log(p_ratio[tok]);
      const double ratio = std::exp(lp - r.log_probs[t]);
      check_finite(ratio, "importance ratio");
      const double term = clipped_term(ratio, adv, cfg.clip_eps);
      // The unclipped branch is the one selected unless clipping strictly
      // lowers the product.
      const bool unclipped = ratio * adv <= term;
      if (unclipped) {
        accumulate_log_prob_grad(fs, p_ratio, tok, w * adv * ratio / ratio_temp, v, out.grad);
      } else {
        ++out.clipped;
      }

      double kl = 0.0;
      if (cfg.kl_beta > 0.0) {
        logits_into(ref, fs, z_ref);
        softmax_into(z_live, 1.0, p_live);
        softmax_into(z_ref, 1.0, p_ref);
        kl = kl_categorical(p_live, p_ref);
        check_finite(kl, "KL term");
        for (std::size_t j = 0; j < v; ++j) {
          dir[j] = p_live[j] > 0.0 ? p_live[j] * (std::log(p_live[j] / p_ref[j]) - kl) : 0.0;
        }
        accumulate_outer(fs, dir, -w * cfg.kl_beta, v, out.grad);
      }
      out.objective += w * (term - cfg.kl_beta * kl);
      out.kl += kl;
      ++out.tokens;
    }
  }
  return out;
}

}  // namespace

ObjectiveResult objective_and_grad(const PolicyParams& policy_live,
                                   std::span<const Group> groups,
                                   const PolicyParams& policy_ref,
                                   const TrainConfig& cfg,
                                   const SamplerConfig& sampler_cfg) {
  if (groups.empty()) throw std::invalid_argument("no groups");
  const double group_weight = 1.0 / static_cast<double>(groups.size());
  std::vector<Partial> parts(groups.size());
  parallel_for(groups.size(), cfg.workers, [&](std::size_t k) {
    parts[k] = group_partial(policy_live, groups[k], policy_ref, cfg, sampler_cfg, group_weight);
  });

  ObjectiveResult res;
  res.grad.assign(policy_live.weights().size(), 0.0);
  std::size_t clipped = 0;
  double kl = 0.0;
  for (const Partial& p : parts) {
    res.objective += p.objective;
    kl += p.kl;
    clipped += p.clipped;
    res.tokens += p.tokens;
    kernels::axpy(1.0, p.grad, res.grad);
  }
  check_finite(res.objective, "objective");
  for (double x : res.grad) check_finite(x, "gradient");
  if (res.tokens > 0) {
    res.kl_mean = kl / static_cast<double>(res.tokens);
    res.clip_frac = static_cast<double>(clipped) / static_cast<double>(res.tokens);
  }
  return res;
}

}  // namespace pear
