// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pear/grpo/sft.hpp"
#include "pear/policy/params.hpp"
#include "pear/rng.hpp"

namespace pear::testing {

inline const Vocab& vocab() {
  static const Vocab v = Vocab::standard();
  return v;
}

// Weights i.i.d. uniform in [-scale, scale].
inline PolicyParams random_params(std::uint64_t seed, double scale) {
  return PolicyParams::uniform_init(vocab(), seed, scale);
}

// Small supervised policy shared by the slower tests; fits the teacher
// format well enough for the filtering and evaluation properties.
inline const PolicyParams& pretrained() {
  static const PolicyParams p = [] {
    const auto corpus = teacher_corpus(kTrainDifficulties, 600, 3.0, 11, vocab());
    SftConfig cfg;
    cfg.epochs = 800;
    cfg.learning_rate = 2.0;
    return sft_pretrain(PolicyParams::zeros(vocab()), corpus, cfg).params;
  }();
  return p;
}

inline std::filesystem::path fixtures_dir() { return PEAR_FIXTURES_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pear_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Token sequences spelled with the standard vocabulary.
inline std::vector<TokenId> toks(std::initializer_list<const char*> words) {
  std::vector<TokenId> out;
  for (const char* w : words) {
    bool found = false;
    for (TokenId t = 0; t < vocab().size; ++t) {
      if (vocab().spelling(t) == w) {
        out.push_back(t);
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument(std::string("no token ") + w);
  }
  return out;
}

}  // namespace pear::testing
