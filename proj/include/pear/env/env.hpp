// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pear/core/language.hpp"
#include "pear/core/response.hpp"
#include "pear/rng.hpp"

namespace pear {

inline constexpr int kMinDifficulty = 2;
inline constexpr int kMaxDifficulty = 6;
inline constexpr std::int64_t kValueBound = 999;

// A chained arithmetic problem: prompt tokens, exact answer, and the number
// of operations.
struct Task {
  std::vector<TokenId> prompt_tokens;
  std::int64_t answer_value = 0;
  int difficulty = 0;

  Expression expression(const Vocab& vocab) const;
  friend bool operator==(const Task&, const Task&) = default;
};

// Operands uniform in [1, 9], operators uniform in {+, -, *}. Expressions
// whose running value leaves [-999, 999] are redrawn. Throws
// std::invalid_argument if difficulty is outside [2, 6].
Task generate_task(int difficulty, Rng& rng, const Vocab& vocab);

// Deterministic task list; task i has difficulty difficulties[i % n] and is
// drawn from its own stream derived from (seed, i).
std::vector<Task> generate_tasks(std::span<const int> difficulties,
                                 std::size_t count, std::uint64_t seed,
                                 const Vocab& vocab);

// Gold response (everything after the prompt): <think>, then per operation a
// geometric number of restatements with mean verbosity - 1 followed by the
// real step, then </think>, the answer, <eos>. Throws std::invalid_argument
// if verbosity < 1.
std::vector<TokenId> teacher_trace(const Task& task, double verbosity, Rng& rng,
                                   const Vocab& vocab);

enum class VerdictKind { kCorrect, kWrong, kMalformed };

struct Verdict {
  VerdictKind kind = VerdictKind::kMalformed;
  std::optional<std::int64_t> extracted_answer;

  bool correct() const { return kind == VerdictKind::kCorrect; }
};

std::string_view to_string(VerdictKind kind);

// Parses the span after </think> as [-] digit+ followed only by <pad>/<eos>.
Verdict verify(const Response& resp, const Task& task, const Vocab& vocab);

// Task dumps, one JSON object per line:
// {"prompt_tokens": [...], "answer_value": n, "difficulty": d}.
std::string to_json_line(const Task& task);
Task task_from_json_line(const std::string& line);
void write_tasks(std::ostream& out, const std::vector<Task>& tasks);
std::vector<Task> read_tasks(std::istream& in);

// Difficulty splits: training draws from {2, 3}; the in-distribution eval
// split uses the same difficulties under a held-out seed; the
// out-of-distribution split covers {4, 5, 6}.
struct EvalSplit {
  std::string name;
  std::vector<int> difficulties;
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

inline const std::vector<int> kTrainDifficulties = {2, 3};
inline const std::vector<int> kOodDifficulties = {4, 5, 6};
inline constexpr std::uint64_t kEvalSeed = 0x5eed0e7a1;

// "id" or "ood" with `count` tasks; throws ConfigError otherwise.
EvalSplit named_split(const std::string& name, std::size_t count);
std::vector<Task> split_tasks(const EvalSplit& split, const Vocab& vocab);

}  // namespace pear
