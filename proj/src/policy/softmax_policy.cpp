// SPDX-License-Identifier: Apache-2.0
#include "pear/policy/softmax_policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pear/error.hpp"
#include "pear/kernels/kernels.hpp"

namespace pear {

void logits_into(const PolicyParams& params, const FeatureSet& features,
                 std::span<double> out) {
  kernels::add_rows(out, params.weights(), params.vocab_size(), features.active());
}

std::vector<double> logits(const PolicyParams& params,
                           std::span<const TokenId> context) {
  const FeatureSet fs = params.feature_map().features(context);
  std::vector<double> out(params.vocab_size());
  logits_into(params, fs, out);
  return out;
}

void softmax_into(std::span<const double> logits, double temperature,
                  std::span<double> out) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  const double m = kernels::max(logits);
  if (!std::isfinite(m)) throw NumericalError("non-finite logits");
  const double inv_t = 1.0 / temperature;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!std::isfinite(logits[i])) throw NumericalError("non-finite logits");
    out[i] = std::exp((logits[i] - m) * inv_t);
  }
  kernels::scale(1.0 / kernels::sum(out), out);
}

Distribution distribution(const PolicyParams& params,
                          std::span<const TokenId> context, double temperature) {
  const auto z = logits(params, context);
  std::vector<double> p(z.size());
  softmax_into(z, temperature, p);
  return Distribution(std::move(p));
}

NucleusMask full_mask(std::size_t vocab_size) {
  return vocab_size >= 64 ? ~NucleusMask{0}
                          : (NucleusMask{1} << vocab_size) - 1;
}

NucleusMask nucleus(std::span<const double> probs, double top_p) {
  std::vector<std::uint32_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return probs[a] > probs[b];
  });
  NucleusMask mask = 0;
  double mass = 0.0;
  for (std::uint32_t t : order) {
    mask |= NucleusMask{1} << t;
    mass += probs[t];
    if (mass >= top_p) break;
  }
  return mask;
}

double masked_log_prob(std::span<const double> logits, double temperature,
                       NucleusMask mask, TokenId token) {
  if (!(mask >> token & 1)) return -INFINITY;
  double m = -INFINITY;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask >> i & 1) m = std::max(m, logits[i]);
  }
  const double inv_t = 1.0 / temperature;
  double s = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask >> i & 1) s += std::exp((logits[i] - m) * inv_t);
  }
  return (logits[token] - m) * inv_t - std::log(s);
}

void masked_softmax_into(std::span<const double> logits, double temperature,
                         NucleusMask mask, std::span<double> out) {
  double m = -INFINITY;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask >> i & 1) m = std::max(m, logits[i]);
  }
  if (!std::isfinite(m)) throw NumericalError("non-finite logits");
  const double inv_t = 1.0 / temperature;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = (mask >> i & 1) ? std::exp((logits[i] - m) * inv_t) : 0.0;
  }
  kernels::scale(1.0 / kernels::sum(out), out);
}

void accumulate_outer(const FeatureSet& features, std::span<const double> direction,
                      double scale, std::size_t vocab_size, std::span<double> grad) {
  for (std::uint32_t f : features.active()) {
    kernels::axpy(scale, direction, grad.subspan(f * vocab_size, vocab_size));
  }
}

void accumulate_log_prob_grad(const FeatureSet& features,
                              std::span<const double> probs, TokenId token,
                              double scale, std::size_t vocab_size,
                              std::span<double> grad) {
  for (std::uint32_t f : features.active()) {
    auto row = grad.subspan(f * vocab_size, vocab_size);
    kernels::axpy(-scale, probs, row);
    row[token] += scale;
  }
}

std::vector<double> grad_log_prob(const PolicyParams& params,
                                  std::span<const TokenId> context, TokenId token) {
  if (!params.vocab().contains(token)) throw std::invalid_argument("unknown token id");
  const FeatureSet fs = params.feature_map().features(context);
  std::vector<double> z(params.vocab_size());
  logits_into(params, fs, z);
  std::vector<double> p(z.size());
  softmax_into(z, 1.0, p);
  std::vector<double> grad(params.weights().size(), 0.0);
  accumulate_log_prob_grad(fs, p, token, 1.0, params.vocab_size(), grad);
  return grad;
}

}  // namespace pear
