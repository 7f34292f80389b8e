// SPDX-License-Identifier: Apache-2.0
#include "pear/core/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace pear {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("empty distribution");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("distribution entries must be finite and >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw std::invalid_argument("distribution does not sum to 1");
  }
}

double entropy_nats(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h > 0.0 ? h : 0.0;
}

double token_entropy(const Distribution& dist) { return entropy_nats(dist.probs()); }

namespace {

double mean_over(std::span<const double> values, const TokenRange& range) {
  if (range.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = range.begin; i < range.end; ++i) s += values[i];
  return s / static_cast<double>(range.size());
}

}  // namespace

PhaseEntropy phase_entropies(const Response& resp,
                             std::span<const double> per_token_entropy) {
  if (per_token_entropy.size() != resp.length()) {
    throw std::invalid_argument("entropy array length does not match response");
  }
  const PhaseSpans spans = segment_phases(resp);
  PhaseEntropy pe;
  pe.think_len = spans.think.size();
  pe.answer_len = spans.answer.size();
  pe.h_think = mean_over(per_token_entropy, spans.think);
  pe.h_answer = mean_over(per_token_entropy, spans.answer);
  pe.h_mean = mean_over(per_token_entropy, {0, resp.length()});
  return pe;
}

}  // namespace pear
