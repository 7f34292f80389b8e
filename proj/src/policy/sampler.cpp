// SPDX-License-Identifier: Apache-2.0
#include "pear/policy/sampler.hpp"

#include <algorithm>
#include <numeric>

#include "pear/core/language.hpp"
#include "pear/error.hpp"

namespace pear {

void SamplerConfig::validate() const {
  if (!(temperature > 0.0)) throw ConfigError("sampler.temperature must be > 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw ConfigError("sampler.top_p must be in (0, 1]");
  }
  if (max_len == 0) throw ConfigError("sampler.max_len must be positive");
}

SampleStreams SampleStreams::from_seed(std::uint64_t seed) {
  return {Rng(derive_seed(seed, {0})), Rng(derive_seed(seed, {1}))};
}

TokenId draw_from_nucleus(std::span<const double> probs, NucleusMask mask, double u) {
  std::vector<std::uint32_t> order;
  double mass = 0.0;
  for (std::uint32_t t = 0; t < probs.size(); ++t) {
    if (mask >> t & 1) {
      order.push_back(t);
      mass += probs[t];
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return probs[a] > probs[b];
  });
  const double target = u * mass;
  double cum = 0.0;
  for (std::uint32_t t : order) {
    cum += probs[t];
    if (target < cum) return t;
  }
  return order.back();
}

double ratio_log_prob(const PolicyParams& params, const FeatureSet& features,
                      NucleusMask mask, TokenId token, const SamplerConfig& cfg) {
  std::vector<double> z(params.vocab_size());
  logits_into(params, features, z);
  const double temperature = cfg.ratio_on_sampling_dist ? cfg.temperature : 1.0;
  return masked_log_prob(z, temperature, mask, token);
}

namespace {

struct Scratch {
  std::vector<double> logits;
  std::vector<double> p_full;
  std::vector<double> p_sample;
  std::vector<double> p_masked;
};

// Everything recorded for one position given its context.
struct Step {
  NucleusMask sample_mask = 0;
  NucleusMask ratio_mask = 0;
};

Step evaluate(const PolicyParams& params, const FeatureSet& fs,
              const SamplerConfig& cfg, Scratch& s) {
  logits_into(params, fs, s.logits);
  softmax_into(s.logits, 1.0, s.p_full);
  softmax_into(s.logits, cfg.temperature, s.p_sample);
  Step step;
  step.sample_mask = nucleus(s.p_sample, cfg.top_p);
  step.ratio_mask = cfg.ratio_on_sampling_dist ? step.sample_mask
                                               : full_mask(params.vocab_size());
  return step;
}

void record(const FeatureSet& fs, const Step& step,
            TokenId token, const SamplerConfig& cfg, Scratch& s, Rollout& out) {
  const double ratio_temp = cfg.ratio_on_sampling_dist ? cfg.temperature : 1.0;
  out.log_probs.push_back(masked_log_prob(s.logits, ratio_temp, step.ratio_mask, token));
  if (cfg.entropy_at_sample_temp) {
    masked_softmax_into(s.logits, cfg.temperature, step.sample_mask, s.p_masked);
    out.entropies.push_back(entropy_nats(s.p_masked));
  } else {
    out.entropies.push_back(entropy_nats(s.p_full));
  }
  out.features.push_back(fs);
  out.masks.push_back(step.ratio_mask);
}

Rollout generate(const PolicyParams& params, std::span<const TokenId> prompt,
                 std::span<const TokenId> prefix, const SamplerConfig& cfg,
                 SampleStreams& streams) {
  cfg.validate();
  const Vocab& vocab = params.vocab();
  const std::size_t v = params.vocab_size();
  Scratch s{std::vector<double>(v), std::vector<double>(v), std::vector<double>(v),
            std::vector<double>(v)};

  std::vector<TokenId> seq(prompt.begin(), prompt.end());
  seq.reserve(prompt.size() + cfg.max_len);
  ScratchpadTracker tracker(vocab);
  tracker.push(prompt);

  Rollout partial{Response({vocab.eos}, 0, vocab), {}, {}, {}, {}, false};

  bool done = false;
  for (TokenId t : prefix) {
    if (!vocab.contains(t)) throw std::invalid_argument("unknown token id");
    const FeatureSet fs = params.feature_map().from_tracker(tracker);
    const Step step = evaluate(params, fs, cfg, s);
    record(fs, step, t, cfg, s, partial);
    seq.push_back(t);
    tracker.push(t);
    if (t == vocab.eos) {
      done = true;
      break;
    }
  }

  while (!done && seq.size() - prompt.size() < cfg.max_len) {
    const FeatureSet fs = params.feature_map().from_tracker(tracker);
    const Step step = evaluate(params, fs, cfg, s);
    Rng& rng = tracker.phase() == Phase::kAnswer ? streams.answer : streams.think;
    const TokenId t = draw_from_nucleus(s.p_sample, step.sample_mask, rng.uniform());
    record(fs, step, t, cfg, s, partial);
    seq.push_back(t);
    tracker.push(t);
    done = t == vocab.eos;
  }

  if (seq.size() == prompt.size()) {
    throw std::invalid_argument("nothing generated");
  }
  partial.response = Response(std::move(seq), prompt.size(), vocab);
  partial.truncated = !done;
  return partial;
}

}  // namespace

Rollout sample_response(const PolicyParams& params, std::span<const TokenId> prompt,
                        const SamplerConfig& cfg, SampleStreams& streams) {
  return generate(params, prompt, {}, cfg, streams);
}

Rollout continue_response(const PolicyParams& params, std::span<const TokenId> prompt,
                          std::span<const TokenId> prefix, const SamplerConfig& cfg,
                          SampleStreams& streams) {
  return generate(params, prompt, prefix, cfg, streams);
}

}  // namespace pear
