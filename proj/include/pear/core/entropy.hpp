// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pear/core/response.hpp"

namespace pear {

// Categorical distribution over the vocabulary. Construction checks that all
// entries are non-negative and sum to one within 1e-9.
class Distribution {
 public:
  static constexpr double kNormTolerance = 1e-9;

  explicit Distribution(std::vector<double> probs);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
};

// Shannon entropy in nats, with 0 ln 0 = 0.
double token_entropy(const Distribution& dist);

// Same formula without the normalization check, for hot loops where the
// probabilities come straight out of a softmax.
double entropy_nats(std::span<const double> probs);

struct PhaseEntropy {
  double h_think = 0.0;
  double h_answer = 0.0;
  double h_mean = 0.0;
  std::size_t think_len = 0;
  std::size_t answer_len = 0;
};

// Phase averages of per-position entropies. Empty phases average to 0.
// Throws std::invalid_argument if the entropy count differs from T.
PhaseEntropy phase_entropies(const Response& resp,
                             std::span<const double> per_token_entropy);

}  // namespace pear
