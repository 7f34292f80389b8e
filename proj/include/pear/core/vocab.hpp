// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pear {

using TokenId = std::uint32_t;

// Token alphabet of the synthetic think-then-answer language.
//
// Ids are laid out contiguously: reserved markers, operators, the ten digits,
// then the filler words used for restatements. The policy keeps one bit per
// token in nucleus masks, so the alphabet is capped at 64 entries.
struct Vocab {
  static constexpr std::size_t kMaxSize = 64;

  std::size_t size = 0;
  TokenId pad = 0;
  TokenId eos = 0;
  TokenId bos = 0;
  TokenId query = 0;  // terminates the prompt
  TokenId think_open = 0;
  TokenId think_close = 0;
  TokenId step_sep = 0;
  TokenId equals = 0;
  TokenId plus = 0;
  TokenId minus = 0;  // subtraction and the sign of negative numbers
  TokenId times = 0;
  TokenId digit0 = 0;  // digits occupy [digit0, digit0 + 10)
  TokenId filler0 = 0;  // fillers occupy [filler0, filler0 + num_fillers)
  std::size_t num_fillers = 0;

  static Vocab standard();

  // Checks the reserved-id invariants; throws std::invalid_argument.
  void validate() const;

  bool contains(TokenId t) const { return t < size; }
  bool is_digit(TokenId t) const { return t >= digit0 && t < digit0 + 10; }
  int digit_value(TokenId t) const { return static_cast<int>(t - digit0); }
  TokenId digit(int d) const { return digit0 + static_cast<TokenId>(d); }
  bool is_filler(TokenId t) const {
    return t >= filler0 && t < filler0 + num_fillers;
  }
  TokenId filler(std::size_t i) const {
    return filler0 + static_cast<TokenId>(i);
  }
  bool is_operator(TokenId t) const {
    return t == plus || t == minus || t == times;
  }

  std::string_view spelling(TokenId t) const;
  std::string render(const std::vector<TokenId>& tokens) const;

  friend bool operator==(const Vocab&, const Vocab&) = default;
};

}  // namespace pear
