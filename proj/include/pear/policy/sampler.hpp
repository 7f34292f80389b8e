// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pear/core/response.hpp"
#include "pear/policy/softmax_policy.hpp"
#include "pear/rng.hpp"

namespace pear {

struct SamplerConfig {
  double temperature = 0.6;
  double top_p = 0.95;
  std::size_t max_len = 256;
  std::uint64_t seed = 0;
  // Reward entropies from the sampling distribution instead of the full
  // temperature-1 distribution.
  bool entropy_at_sample_temp = false;
  // Importance-ratio log-probs under the sampling distribution (temperature
  // and nucleus applied). When false, the full temperature-1 distribution.
  bool ratio_on_sampling_dist = true;

  // Throws ConfigError.
  void validate() const;
};

// Two independent random streams: one drives every token up to and including
// </think>, the other every token after it. Keeping them apart lets the
// answer phase be replayed from an edited thinking trace with the exact
// randomness the original rollout used.
struct SampleStreams {
  Rng think;
  Rng answer;

  static SampleStreams from_seed(std::uint64_t seed);
};

struct Rollout {
  Response response;
  // Per generated position, under the importance-ratio convention.
  std::vector<double> log_probs;
  // Per generated position, under the reward-entropy convention.
  std::vector<double> entropies;
  std::vector<FeatureSet> features;
  // Support the log-prob was normalized over (all tokens when the ratio uses
  // the full distribution).
  std::vector<NucleusMask> masks;
  bool truncated = false;
};

// Autoregressive nucleus sampling from prompt until <eos> or max_len.
Rollout sample_response(const PolicyParams& params, std::span<const TokenId> prompt,
                        const SamplerConfig& cfg, SampleStreams& streams);

// Scores `prefix` as if it had been generated, then keeps sampling. The
// max_len budget counts the prefix.
Rollout continue_response(const PolicyParams& params, std::span<const TokenId> prompt,
                          std::span<const TokenId> prefix, const SamplerConfig& cfg,
                          SampleStreams& streams);

// Draws one token from `probs` restricted to `mask` with a uniform u in
// [0, 1), walking tokens in nucleus order.
TokenId draw_from_nucleus(std::span<const double> probs, NucleusMask mask, double u);

// Log-probability of `token` given the cached features, under the ratio
// convention of cfg. Also used to recompute ratios after the fact.
double ratio_log_prob(const PolicyParams& params, const FeatureSet& features,
                      NucleusMask mask, TokenId token, const SamplerConfig& cfg);

}  // namespace pear
