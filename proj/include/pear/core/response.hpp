// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pear/core/vocab.hpp"

namespace pear {

// Half-open range [begin, end) of 0-based generated-token positions.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end > begin ? end - begin : 0; }
  bool empty() const { return size() == 0; }
  bool contains(std::size_t pos) const { return pos >= begin && pos < end; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

struct PhaseSpans {
  TokenRange think;
  TokenRange answer;
};

// A generated sequence y_1..y_T together with the prompt it was conditioned
// on. close_index() is the 1-based position k of the first </think>, or T
// when the marker is absent.
class Response {
 public:
  // `sequence` is prompt followed by the generated tokens. Throws
  // std::invalid_argument if nothing was generated or a token is outside the
  // vocabulary.
  Response(std::vector<TokenId> sequence, std::size_t prompt_len,
           const Vocab& vocab);

  const std::vector<TokenId>& sequence() const { return sequence_; }
  std::span<const TokenId> prompt() const {
    return {sequence_.data(), prompt_len_};
  }
  std::span<const TokenId> generated() const {
    return {sequence_.data() + prompt_len_, sequence_.size() - prompt_len_};
  }
  std::size_t prompt_len() const { return prompt_len_; }
  std::size_t length() const { return sequence_.size() - prompt_len_; }
  std::size_t close_index() const { return close_index_; }
  bool has_close() const { return has_close_; }

 private:
  std::vector<TokenId> sequence_;
  std::size_t prompt_len_;
  std::size_t close_index_;
  bool has_close_;
};

// Thinking span covers positions 1..k-1 and the answer span k+1..T (1-based);
// position k belongs to neither. Without </think> the answer span is empty.
PhaseSpans segment_phases(const Response& resp);

}  // namespace pear
