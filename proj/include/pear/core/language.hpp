// SPDX-License-Identifier: Apache-2.0
#pragma once

// Grammar of the synthetic arithmetic language.
//
//   prompt   := <bos> d (op d)* ?
//   response := <think> seg (| seg)* </think> answer <eos>
//   seg      := value op d = value          (a real step)
//             | filler = value              (a restatement of the running value)
//   answer   := value
//   value    := [-] digit+
//
// Expressions evaluate strictly left to right: ((a op b) op c) op d.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pear/core/vocab.hpp"

namespace pear {

enum class Op : std::uint8_t { kAdd, kSub, kMul };

std::int64_t apply(Op op, std::int64_t lhs, std::int64_t rhs);
TokenId op_token(Op op, const Vocab& vocab);
std::optional<Op> token_op(TokenId t, const Vocab& vocab);

struct Expression {
  std::int64_t first = 0;
  std::vector<Op> ops;
  std::vector<std::int64_t> operands;  // right-hand operands, one per op

  std::int64_t evaluate() const;
  friend bool operator==(const Expression&, const Expression&) = default;
};

// Tokens of a signed integer: optional minus, then decimal digits.
std::vector<TokenId> render_value(std::int64_t value, const Vocab& vocab);
void append_value(std::int64_t value, const Vocab& vocab,
                  std::vector<TokenId>& out);

// Strict parse of [-] digit+ (at most 12 digits); nullopt otherwise.
std::optional<std::int64_t> parse_value(std::span<const TokenId> tokens,
                                        const Vocab& vocab);

std::vector<TokenId> render_prompt(const Expression& expr, const Vocab& vocab);
std::optional<Expression> parse_prompt(std::span<const TokenId> prompt,
                                       const Vocab& vocab);

enum class Phase : std::uint8_t { kPrompt = 0, kThink = 1, kAnswer = 2 };

// Incremental reader of a context (prompt followed by generated tokens).
//
// Besides phase bookkeeping it tracks the scratchpad: the running value
// written by the most recent completed segment and the number of real steps
// taken. From those it reports the canonical next token, i.e. what a
// well-formed continuation without further restatements would emit. The
// continuation depends only on what is written in the context, so a wrong
// intermediate result propagates into later steps and into the answer.
class ScratchpadTracker {
 public:
  explicit ScratchpadTracker(const Vocab& vocab);

  void push(TokenId t);
  void push(std::span<const TokenId> tokens) {
    for (TokenId t : tokens) push(t);
  }

  std::size_t size() const { return size_; }
  bool prompt_done() const { return prompt_done_; }
  Phase phase() const { return phase_; }
  // Generated tokens since the current phase began (0 right after the
  // phase marker, or right after the prompt).
  std::size_t position_in_phase() const { return pos_in_phase_; }
  std::optional<TokenId> last() const { return last_; }
  std::optional<TokenId> second_last() const { return second_last_; }

  std::optional<TokenId> expected_next() const;

 private:
  void push_prompt(TokenId t);
  void push_generated(TokenId t);
  void close_segment();
  void rebuild_canonical();
  std::optional<TokenId> expected_in_think() const;
  std::optional<TokenId> expected_in_answer() const;
  TokenId segment_end_token(bool completes_real) const;

  Vocab vocab_;
  std::size_t size_ = 0;
  std::optional<TokenId> last_;
  std::optional<TokenId> second_last_;

  // Prompt.
  bool prompt_done_ = false;
  bool prompt_ok_ = true;
  std::vector<TokenId> prompt_tokens_;
  std::optional<Expression> expr_;

  // Generation.
  std::size_t generated_ = 0;
  Phase phase_ = Phase::kPrompt;
  std::size_t pos_in_phase_ = 0;
  bool think_ok_ = false;
  bool seen_open_ = false;
  std::int64_t acc_ = 0;
  std::size_t real_done_ = 0;
  std::vector<TokenId> partial_;
  std::vector<TokenId> canonical_real_;
  std::vector<TokenId> canonical_value_;  // render_value(acc_)
  bool answer_ok_ = false;
  std::vector<TokenId> answer_target_;
  std::vector<TokenId> answer_;
};

}  // namespace pear
