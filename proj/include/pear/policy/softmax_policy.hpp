// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pear/core/entropy.hpp"
#include "pear/policy/params.hpp"

namespace pear {

// logits_v = sum over active features f of w[f, v].
void logits_into(const PolicyParams& params, const FeatureSet& features,
                 std::span<double> out);
std::vector<double> logits(const PolicyParams& params,
                           std::span<const TokenId> context);

// softmax(logits / temperature) with max subtraction. Throws NumericalError
// on non-finite logits and std::invalid_argument on temperature <= 0.
void softmax_into(std::span<const double> logits, double temperature,
                  std::span<double> out);
Distribution distribution(const PolicyParams& params,
                          std::span<const TokenId> context, double temperature);

// One bit per token; set bits form the support of a nucleus.
using NucleusMask = std::uint64_t;

NucleusMask full_mask(std::size_t vocab_size);

// Smallest prefix of tokens sorted by probability (descending, ties by lower
// id) whose mass reaches top_p.
NucleusMask nucleus(std::span<const double> probs, double top_p);

// log of softmax(logits / temperature) restricted to `mask`, at `token`.
double masked_log_prob(std::span<const double> logits, double temperature,
                       NucleusMask mask, TokenId token);

// Renormalized softmax(logits / temperature) over `mask`, zero elsewhere.
void masked_softmax_into(std::span<const double> logits, double temperature,
                         NucleusMask mask, std::span<double> out);

// grad[f, v] += scale * (1[v == token] - probs[v]) for every active f. With
// probs from the temperature-tau distribution and scale = c / tau, this adds
// c times the gradient of that log-probability.
void accumulate_log_prob_grad(const FeatureSet& features,
                              std::span<const double> probs, TokenId token,
                              double scale, std::size_t vocab_size,
                              std::span<double> grad);

// Adds scale * phi(context) (x) direction to grad.
void accumulate_outer(const FeatureSet& features, std::span<const double> direction,
                      double scale, std::size_t vocab_size, std::span<double> grad);

// Exact gradient of log softmax(logits)[token] (temperature 1) with respect
// to every weight: phi (x) (e_token - p).
std::vector<double> grad_log_prob(const PolicyParams& params,
                                  std::span<const TokenId> context, TokenId token);

}  // namespace pear
