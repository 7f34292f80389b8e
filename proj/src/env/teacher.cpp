// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>

#include "pear/env/env.hpp"

namespace pear {

std::vector<TokenId> teacher_trace(const Task& task, double verbosity, Rng& rng,
                                   const Vocab& vocab) {
  if (!(verbosity >= 1.0)) throw std::invalid_argument("verbosity must be >= 1");
  // Restatements per operation ~ Geometric with mean verbosity - 1.
  const double repeat = (verbosity - 1.0) / verbosity;
  constexpr int kMaxRestatements = 64;

  const Expression expr = task.expression(vocab);
  std::vector<TokenId> out{vocab.think_open};
  std::int64_t acc = expr.first;
  for (std::size_t i = 0; i < expr.ops.size(); ++i) {
    for (int r = 0; r < kMaxRestatements && rng.bernoulli(repeat); ++r) {
      out.push_back(vocab.filler(rng.below(vocab.num_fillers)));
      out.push_back(vocab.equals);
      append_value(acc, vocab, out);
      out.push_back(vocab.step_sep);
    }
    append_value(acc, vocab, out);
    out.push_back(op_token(expr.ops[i], vocab));
    append_value(expr.operands[i], vocab, out);
    out.push_back(vocab.equals);
    acc = apply(expr.ops[i], acc, expr.operands[i]);
    append_value(acc, vocab, out);
    if (i + 1 < expr.ops.size()) out.push_back(vocab.step_sep);
  }
  out.push_back(vocab.think_close);
  append_value(acc, vocab, out);
  out.push_back(vocab.eos);
  return out;
}

}  // namespace pear
