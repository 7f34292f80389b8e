// SPDX-License-Identifier: Apache-2.0
// Regenerates the golden task files under a fixtures directory.
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pear/env/env.hpp"

namespace {

void write(const std::filesystem::path& path, const std::vector<pear::Task>& tasks) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  pear::write_tasks(out, tasks);
  std::printf("%s: %zu tasks\n", path.c_str(), tasks.size());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <fixtures-dir>\n", argv[0]);
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  const pear::Vocab vocab = pear::Vocab::standard();

  pear::Rng rng(0);
  write(dir / "golden_task_d2_s0.jsonl", {pear::generate_task(2, rng, vocab)});
  write(dir / "eval_id.jsonl", pear::split_tasks(pear::named_split("id", 300), vocab));
  write(dir / "eval_ood.jsonl", pear::split_tasks(pear::named_split("ood", 300), vocab));
  return 0;
}
