// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "pear/core/language.hpp"
#include "pear/core/vocab.hpp"

namespace pear {

// Indices of the active (value 1) features at one position. All features
// are binary, so a context is fully described by which rows are on.
struct FeatureSet {
  static constexpr std::size_t kMax = 5;

  std::array<std::uint32_t, kMax> rows{};
  std::uint8_t count = 0;

  void add(std::uint32_t row) { rows[count++] = row; }
  std::span<const std::uint32_t> active() const { return {rows.data(), count}; }
  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

// Context features of the policy, concatenated in this order:
//   one-hot(last token)                          |V|
//   one-hot(second-to-last token)                |V|
//   one-hot(phase: prompt, think, answer)        3
//   position-in-phase bucket (0-3, 4-7, 8-15, 16+) 4
//   one-hot(scratchpad continuation, or none)    |V| + 1
class FeatureMap {
 public:
  static constexpr std::size_t kPhases = 3;
  static constexpr std::size_t kBuckets = 4;

  explicit FeatureMap(const Vocab& vocab);

  const Vocab& vocab() const { return vocab_; }
  std::size_t num_features() const { return 3 * vocab_.size + 8; }

  std::uint32_t last_row(TokenId t) const { return t; }
  std::uint32_t second_last_row(TokenId t) const {
    return static_cast<std::uint32_t>(vocab_.size) + t;
  }
  std::uint32_t phase_row(Phase p) const {
    return static_cast<std::uint32_t>(2 * vocab_.size) +
           static_cast<std::uint32_t>(p);
  }
  std::uint32_t bucket_row(std::size_t bucket) const {
    return static_cast<std::uint32_t>(2 * vocab_.size + kPhases + bucket);
  }
  // `none` selects the slot for contexts without a well-formed continuation.
  std::uint32_t cue_row(std::optional<TokenId> t) const {
    const auto base = static_cast<std::uint32_t>(2 * vocab_.size + kPhases + kBuckets);
    return base + (t ? *t : static_cast<std::uint32_t>(vocab_.size));
  }

  static std::size_t bucket(std::size_t position_in_phase);

  FeatureSet from_tracker(const ScratchpadTracker& tracker) const;

  // Features of a full context (prompt plus generated prefix). Throws
  // std::invalid_argument for an empty context or unknown token id.
  FeatureSet features(std::span<const TokenId> context) const;

  // Stable identifier of the feature layout, stored in checkpoints.
  std::uint64_t digest() const;
  std::string describe() const;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  Vocab vocab_;
};

}  // namespace pear
