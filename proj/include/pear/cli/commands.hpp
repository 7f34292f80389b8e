// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pear/analysis/analysis.hpp"
#include "pear/cli/config.hpp"

namespace pear {

// Files written under cfg.out by each command:
//   pretrain: config.txt, policy.ckpt, pretrain_loss.jsonl
//   train:    config.txt, policy.ckpt, metrics.jsonl, audit.jsonl
//   eval:     config.txt, eval.csv, traces.jsonl
//   analyze:  config.txt and one report per experiment (see cmd_analyze)
//   sweep:    config.txt, sweep.csv

void cmd_pretrain(const RunConfig& cfg);
// Throws ArtifactError if the checkpoint is missing or does not match.
void cmd_train(const RunConfig& cfg, const std::filesystem::path& checkpoint);
std::vector<EvalRow> cmd_eval(const RunConfig& cfg, const std::filesystem::path& checkpoint);
// corr -> corr.csv, corr_summary.csv; phases -> phases.csv (phase_shift.csv
// with a baseline checkpoint); filter -> filter.csv; steps -> steps.csv;
// alpha -> sweep.csv. Throws ConfigError for an unknown experiment.
void cmd_analyze(const RunConfig& cfg, const std::filesystem::path& checkpoint);
std::vector<SweepRow> cmd_sweep(const RunConfig& cfg, const std::filesystem::path& checkpoint);

// Tasks of cfg.eval_split: "id", "ood", or a task dump file.
std::vector<Task> load_split(const RunConfig& cfg, const Vocab& vocab);

}  // namespace pear
