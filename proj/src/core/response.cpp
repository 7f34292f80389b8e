// SPDX-License-Identifier: Apache-2.0
#include "pear/core/response.hpp"

#include <algorithm>
#include <stdexcept>

namespace pear {

Response::Response(std::vector<TokenId> sequence, std::size_t prompt_len,
                   const Vocab& vocab)
    : sequence_(std::move(sequence)), prompt_len_(prompt_len) {
  if (prompt_len_ >= sequence_.size()) {
    throw std::invalid_argument("response must contain at least one token");
  }
  for (TokenId t : sequence_) {
    if (!vocab.contains(t)) throw std::invalid_argument("unknown token id");
  }
  const auto gen = generated();
  const auto it = std::find(gen.begin(), gen.end(), vocab.think_close);
  has_close_ = it != gen.end();
  close_index_ = has_close_ ? static_cast<std::size_t>(it - gen.begin()) + 1
                            : gen.size();
}

PhaseSpans segment_phases(const Response& resp) {
  const std::size_t k = resp.close_index();
  const std::size_t t = resp.length();
  PhaseSpans spans;
  spans.think = {0, k - 1};
  spans.answer = resp.has_close() ? TokenRange{k, t} : TokenRange{t, t};
  return spans;
}

}  // namespace pear
