// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pear/env/env.hpp"
#include "pear/policy/params.hpp"

namespace pear {

struct Demonstration {
  std::vector<TokenId> prompt;
  std::vector<TokenId> response;
};

// `count` teacher traces on tasks with difficulties cycling through
// `difficulties`; trace i uses streams derived from (seed, i).
std::vector<Demonstration> teacher_corpus(std::span<const int> difficulties,
                                          std::size_t count, double verbosity,
                                          std::uint64_t seed, const Vocab& vocab);

struct SftConfig {
  std::size_t epochs = 2000;
  double learning_rate = 2.0;
  std::size_t workers = 1;

  // Throws ConfigError.
  void validate() const;
};

struct SftResult {
  PolicyParams params;
  // Mean per-token negative log-likelihood before each update, plus the
  // final value: epochs + 1 entries.
  std::vector<double> losses;
};

// Full-batch gradient ascent on the mean token log-likelihood of the
// responses under the temperature-1 policy. Throws std::invalid_argument
// for an empty corpus and NumericalError if the loss becomes non-finite.
SftResult sft_pretrain(const PolicyParams& init, std::span<const Demonstration> corpus,
                       const SftConfig& cfg);

}  // namespace pear
