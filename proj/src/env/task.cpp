// SPDX-License-Identifier: Apache-2.0
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "pear/env/env.hpp"
#include "pear/error.hpp"

namespace pear {

using nlohmann::json;

Expression Task::expression(const Vocab& vocab) const {
  auto expr = parse_prompt(prompt_tokens, vocab);
  if (!expr) throw std::invalid_argument("task prompt is malformed");
  return *expr;
}

Task generate_task(int difficulty, Rng& rng, const Vocab& vocab) {
  if (difficulty < kMinDifficulty || difficulty > kMaxDifficulty) {
    throw std::invalid_argument("difficulty must be in [2, 6]");
  }
  constexpr Op kOps[] = {Op::kAdd, Op::kSub, Op::kMul};
  for (;;) {
    Expression expr;
    expr.first = rng.between(1, 9);
    std::int64_t value = expr.first;
    bool in_range = true;
    for (int i = 0; i < difficulty; ++i) {
      const Op op = kOps[rng.below(3)];
      const std::int64_t rhs = rng.between(1, 9);
      expr.ops.push_back(op);
      expr.operands.push_back(rhs);
      value = apply(op, value, rhs);
      in_range = in_range && value >= -kValueBound && value <= kValueBound;
    }
    if (!in_range) continue;
    return Task{render_prompt(expr, vocab), value, difficulty};
  }
}

std::vector<Task> generate_tasks(std::span<const int> difficulties,
                                 std::size_t count, std::uint64_t seed,
                                 const Vocab& vocab) {
  if (difficulties.empty()) throw std::invalid_argument("no difficulties given");
  std::vector<Task> tasks;
  tasks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {i}));
    tasks.push_back(generate_task(difficulties[i % difficulties.size()], rng, vocab));
  }
  return tasks;
}

std::string to_json_line(const Task& task) {
  const json j = {{"prompt_tokens", task.prompt_tokens},
                  {"answer_value", task.answer_value},
                  {"difficulty", task.difficulty}};
  return j.dump();
}

Task task_from_json_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    Task t;
    j.at("prompt_tokens").get_to(t.prompt_tokens);
    j.at("answer_value").get_to(t.answer_value);
    j.at("difficulty").get_to(t.difficulty);
    return t;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad task record: ") + e.what());
  }
}

void write_tasks(std::ostream& out, const std::vector<Task>& tasks) {
  for (const auto& t : tasks) out << to_json_line(t) << '\n';
}

std::vector<Task> read_tasks(std::istream& in) {
  std::vector<Task> tasks;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) tasks.push_back(task_from_json_line(line));
  }
  return tasks;
}

EvalSplit named_split(const std::string& name, std::size_t count) {
  if (name == "id") return {name, kTrainDifficulties, kEvalSeed, count};
  if (name == "ood") return {name, kOodDifficulties, kEvalSeed + 1, count};
  throw ConfigError("unknown split '" + name + "' (expected id or ood)");
}

std::vector<Task> split_tasks(const EvalSplit& split, const Vocab& vocab) {
  return generate_tasks(split.difficulties, split.count, split.seed, vocab);
}

}  // namespace pear
