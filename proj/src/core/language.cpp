// SPDX-License-Identifier: Apache-2.0
#include "pear/core/language.hpp"

#include <algorithm>
#include <stdexcept>

namespace pear {

std::int64_t apply(Op op, std::int64_t lhs, std::int64_t rhs) {
  switch (op) {
    case Op::kAdd:
      return lhs + rhs;
    case Op::kSub:
      return lhs - rhs;
    case Op::kMul:
      return lhs * rhs;
  }
  return 0;
}

TokenId op_token(Op op, const Vocab& vocab) {
  switch (op) {
    case Op::kAdd:
      return vocab.plus;
    case Op::kSub:
      return vocab.minus;
    case Op::kMul:
      return vocab.times;
  }
  return vocab.plus;
}

std::optional<Op> token_op(TokenId t, const Vocab& vocab) {
  if (t == vocab.plus) return Op::kAdd;
  if (t == vocab.minus) return Op::kSub;
  if (t == vocab.times) return Op::kMul;
  return std::nullopt;
}

std::int64_t Expression::evaluate() const {
  std::int64_t v = first;
  for (std::size_t i = 0; i < ops.size(); ++i) v = apply(ops[i], v, operands[i]);
  return v;
}

void append_value(std::int64_t value, const Vocab& vocab,
                  std::vector<TokenId>& out) {
  std::uint64_t mag;
  if (value < 0) {
    out.push_back(vocab.minus);
    mag = static_cast<std::uint64_t>(-(value + 1)) + 1;
  } else {
    mag = static_cast<std::uint64_t>(value);
  }
  TokenId digits[20];
  int n = 0;
  do {
    digits[n++] = vocab.digit(static_cast<int>(mag % 10));
    mag /= 10;
  } while (mag != 0);
  while (n > 0) out.push_back(digits[--n]);
}

std::vector<TokenId> render_value(std::int64_t value, const Vocab& vocab) {
  std::vector<TokenId> out;
  append_value(value, vocab, out);
  return out;
}

std::optional<std::int64_t> parse_value(std::span<const TokenId> tokens,
                                        const Vocab& vocab) {
  constexpr std::size_t kMaxDigits = 12;
  std::size_t i = 0;
  bool negative = false;
  if (i < tokens.size() && tokens[i] == vocab.minus) {
    negative = true;
    ++i;
  }
  const std::size_t digits = tokens.size() - i;
  if (digits == 0 || digits > kMaxDigits) return std::nullopt;
  std::int64_t v = 0;
  for (; i < tokens.size(); ++i) {
    if (!vocab.is_digit(tokens[i])) return std::nullopt;
    v = v * 10 + vocab.digit_value(tokens[i]);
  }
  return negative ? -v : v;
}

std::vector<TokenId> render_prompt(const Expression& expr, const Vocab& vocab) {
  if (expr.first < 0 || expr.first > 9) {
    throw std::invalid_argument("prompt operands must be single digits");
  }
  std::vector<TokenId> out{vocab.bos, vocab.digit(static_cast<int>(expr.first))};
  for (std::size_t i = 0; i < expr.ops.size(); ++i) {
    if (expr.operands[i] < 0 || expr.operands[i] > 9) {
      throw std::invalid_argument("prompt operands must be single digits");
    }
    out.push_back(op_token(expr.ops[i], vocab));
    out.push_back(vocab.digit(static_cast<int>(expr.operands[i])));
  }
  out.push_back(vocab.query);
  return out;
}

std::optional<Expression> parse_prompt(std::span<const TokenId> prompt,
                                       const Vocab& vocab) {
  if (prompt.size() < 3 || prompt.size() % 2 == 0) return std::nullopt;
  if (prompt.front() != vocab.bos || prompt.back() != vocab.query) {
    return std::nullopt;
  }
  if (!vocab.is_digit(prompt[1])) return std::nullopt;
  Expression expr;
  expr.first = vocab.digit_value(prompt[1]);
  for (std::size_t i = 2; i + 1 < prompt.size(); i += 2) {
    const auto op = token_op(prompt[i], vocab);
    if (!op || !vocab.is_digit(prompt[i + 1])) return std::nullopt;
    expr.ops.push_back(*op);
    expr.operands.push_back(vocab.digit_value(prompt[i + 1]));
  }
  return expr;
}

// ---------------------------------------------------------------------------
// ScratchpadTracker

ScratchpadTracker::ScratchpadTracker(const Vocab& vocab) : vocab_(vocab) {}

void ScratchpadTracker::push(TokenId t) {
  second_last_ = last_;
  last_ = t;
  ++size_;
  if (!prompt_done_) {
    push_prompt(t);
  } else {
    push_generated(t);
  }
}

void ScratchpadTracker::push_prompt(TokenId t) {
  prompt_tokens_.push_back(t);
  if (t != vocab_.query) return;
  prompt_done_ = true;
  expr_ = parse_prompt(prompt_tokens_, vocab_);
  prompt_ok_ = expr_.has_value();
  if (prompt_ok_) {
    acc_ = expr_->first;
    rebuild_canonical();
  }
}

void ScratchpadTracker::push_generated(TokenId t) {
  const bool first = generated_ == 0;
  ++generated_;

  if (phase_ == Phase::kAnswer) {
    ++pos_in_phase_;
    answer_.push_back(t);
    return;
  }

  if (t == vocab_.think_close) {
    if (think_ok_ && phase_ == Phase::kThink) {
      close_segment();
      answer_ok_ = true;
      answer_target_ = render_value(acc_, vocab_);
    }
    phase_ = Phase::kAnswer;
    pos_in_phase_ = 0;
    return;
  }

  if (t == vocab_.think_open && !seen_open_) {
    seen_open_ = true;
    think_ok_ = first && prompt_ok_;
    phase_ = Phase::kThink;
    pos_in_phase_ = 0;
    return;
  }

  ++pos_in_phase_;
  if (phase_ != Phase::kThink || !think_ok_) return;
  if (t == vocab_.step_sep) {
    close_segment();
  } else {
    partial_.push_back(t);
  }
}

void ScratchpadTracker::close_segment() {
  if (partial_.empty()) return;
  const TokenId head = partial_.front();
  if (vocab_.is_digit(head) || head == vocab_.minus) ++real_done_;
  const auto eq = std::find(partial_.rbegin(), partial_.rend(), vocab_.equals);
  if (eq != partial_.rend()) {
    const auto start = static_cast<std::size_t>(eq.base() - partial_.begin());
    const std::span<const TokenId> tail(partial_.data() + start,
                                        partial_.size() - start);
    if (const auto v = parse_value(tail, vocab_)) acc_ = *v;
  }
  partial_.clear();
  rebuild_canonical();
}

void ScratchpadTracker::rebuild_canonical() {
  canonical_value_ = render_value(acc_, vocab_);
  canonical_real_.clear();
  if (!expr_ || real_done_ >= expr_->ops.size()) return;
  const Op op = expr_->ops[real_done_];
  const std::int64_t rhs = expr_->operands[real_done_];
  canonical_real_ = canonical_value_;
  canonical_real_.push_back(op_token(op, vocab_));
  append_value(rhs, vocab_, canonical_real_);
  canonical_real_.push_back(vocab_.equals);
  append_value(apply(op, acc_, rhs), vocab_, canonical_real_);
}

TokenId ScratchpadTracker::segment_end_token(bool completes_real) const {
  const std::size_t done = real_done_ + (completes_real ? 1 : 0);
  return done < expr_->ops.size() ? vocab_.step_sep : vocab_.think_close;
}

std::optional<TokenId> ScratchpadTracker::expected_next() const {
  if (!prompt_done_ || !prompt_ok_) return std::nullopt;
  if (generated_ == 0) return vocab_.think_open;
  switch (phase_) {
    case Phase::kPrompt:
      return std::nullopt;
    case Phase::kThink:
      return think_ok_ ? expected_in_think() : std::nullopt;
    case Phase::kAnswer:
      return answer_ok_ ? expected_in_answer() : std::nullopt;
  }
  return std::nullopt;
}

std::optional<TokenId> ScratchpadTracker::expected_in_think() const {
  const std::size_t n = partial_.size();
  if (n == 0) {
    return canonical_real_.empty() ? vocab_.think_close : canonical_real_[0];
  }
  if (vocab_.is_filler(partial_[0])) {
    // filler = value
    const std::size_t total = 2 + canonical_value_.size();
    if (n > total) return std::nullopt;
    for (std::size_t i = 1; i < n; ++i) {
      const TokenId want = i == 1 ? vocab_.equals : canonical_value_[i - 2];
      if (partial_[i] != want) return std::nullopt;
    }
    if (n == total) return segment_end_token(false);
    return n == 1 ? vocab_.equals : canonical_value_[n - 2];
  }
  if (canonical_real_.empty() || n > canonical_real_.size()) return std::nullopt;
  if (!std::equal(partial_.begin(), partial_.end(), canonical_real_.begin())) {
    return std::nullopt;
  }
  if (n == canonical_real_.size()) return segment_end_token(true);
  return canonical_real_[n];
}

std::optional<TokenId> ScratchpadTracker::expected_in_answer() const {
  const std::size_t n = answer_.size();
  const std::size_t m = answer_target_.size();
  if (n < m) {
    if (!std::equal(answer_.begin(), answer_.end(), answer_target_.begin())) {
      return std::nullopt;
    }
    return answer_target_[n];
  }
  if (!std::equal(answer_target_.begin(), answer_target_.end(), answer_.begin())) {
    return std::nullopt;
  }
  for (std::size_t i = m; i < n; ++i) {
    if (answer_[i] != vocab_.pad) return std::nullopt;
  }
  return vocab_.eos;
}

}  // namespace pear
