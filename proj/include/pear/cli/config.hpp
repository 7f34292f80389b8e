// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pear/grpo/config.hpp"
#include "pear/grpo/sft.hpp"
#include "pear/policy/sampler.hpp"

namespace pear {

// Every setting of every command. Files hold one `key = value` per line
// with flat dotted keys; blank lines and lines starting with '#' are
// ignored. Lists are comma-separated.
struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out = "runs/default";
  std::size_t workers = 0;  // 0: available parallelism

  SamplerConfig sampler;
  TrainConfig train;
  RewardKind reward_kind = RewardKind::kPear;
  RewardConfig reward;

  double verbosity = 3.0;
  std::vector<int> train_difficulties = {2, 3};

  std::size_t pretrain_corpus = 2000;
  SftConfig pretrain;

  std::string eval_split = "id";  // id, ood, or a task dump path
  std::size_t eval_count = 300;
  std::uint64_t eval_seed = 99;

  std::string experiment = "corr";
  std::size_t analyze_episodes = 600;
  std::vector<double> retain_fractions = {1.0, 0.8, 0.6, 0.4, 0.2};
  std::filesystem::path baseline_checkpoint;  // "before" set for phases/steps
  std::filesystem::path traces;               // read episodes instead of sampling

  std::vector<double> sweep_alphas = {-1.0, 0.0, 1.0, 2.0, 4.0};
  bool sweep_include_binary = true;

  // Applies one setting; throws ConfigError for unknown keys or values that
  // do not parse.
  void set(const std::string& key, const std::string& value);
  // Throws ConfigError.
  void validate() const;
  std::size_t resolved_workers() const;
  // Every key except workers, in a fixed order and in the file format read by
  // apply_config_text.
  void write(std::ostream& out) const;
  static std::vector<std::string> keys();
};

// Applies every line of a config file. Throws ConfigError if the file is
// missing or malformed.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);
void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& origin);

// "key=value"; throws ConfigError.
void apply_override(RunConfig& cfg, const std::string& assignment);

}  // namespace pear
