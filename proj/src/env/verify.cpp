// SPDX-License-Identifier: Apache-2.0
#include "pear/env/env.hpp"

namespace pear {

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kCorrect:
      return "correct";
    case VerdictKind::kWrong:
      return "wrong";
    case VerdictKind::kMalformed:
      return "malformed";
  }
  return "malformed";
}

Verdict verify(const Response& resp, const Task& task, const Vocab& vocab) {
  const PhaseSpans spans = segment_phases(resp);
  auto answer = resp.generated().subspan(spans.answer.begin, spans.answer.size());
  while (!answer.empty() && (answer.back() == vocab.pad || answer.back() == vocab.eos)) {
    answer = answer.first(answer.size() - 1);
  }
  const auto value = parse_value(answer, vocab);
  if (!value) return {VerdictKind::kMalformed, std::nullopt};
  return {*value == task.answer_value ? VerdictKind::kCorrect : VerdictKind::kWrong, value};
}

}  // namespace pear
