// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pear/core/trace_io.hpp"
#include "pear/env/env.hpp"
#include "pear/grpo/train.hpp"
#include "pear/policy/sampler.hpp"

namespace pear {

// Per-response quantities. A step is a STEP_SEP-delimited segment; a
// non-empty phase with s separators has s + 1 steps, an empty phase has 0.
struct EpisodeStats {
  std::size_t length = 0;
  std::size_t think_len = 0;
  std::size_t answer_len = 0;
  double h_mean = 0.0;
  double h_think = 0.0;
  double h_answer = 0.0;
  VerdictKind verdict = VerdictKind::kMalformed;
  int difficulty = 0;
  std::size_t steps_think = 0;
  std::size_t steps_answer = 0;
  double tokens_per_step_think = 0.0;
  double tokens_per_step_answer = 0.0;
};

EpisodeStats episode_stats(const Response& resp, std::span<const double> entropies,
                           VerdictKind verdict, const Vocab& vocab, int difficulty = 0);

struct Episode {
  TraceRecord trace;
  EpisodeStats stats;
};

// One sampled response per task; task i uses SampleStreams::from_seed(
// derive_seed(seed, {i})). Results are in task order for any worker count.
std::vector<Episode> rollout_episodes(const PolicyParams& params, std::span<const Task> tasks,
                                      const SamplerConfig& sampler_cfg, std::uint64_t seed,
                                      std::size_t workers);

struct EvalRow {
  std::string difficulty;  // a number, or "all"
  std::size_t n = 0;
  double accuracy = 0.0;
  double mean_len = 0.0;
  double mean_think_len = 0.0;
  double mean_answer_len = 0.0;
};

// Accuracy and mean length per difficulty (ascending), then the overall row.
// Throws std::invalid_argument on an empty set.
std::vector<EvalRow> eval_table(std::span<const Episode> episodes);

// Pearson correlation; nullopt when either series is constant. Throws
// std::invalid_argument on a size mismatch or fewer than two points.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct LengthBucket {
  std::size_t lo = 0;  // inclusive
  std::size_t hi = 0;  // exclusive
  std::size_t count = 0;
  double mean_h = 0.0;
  double mean_len = 0.0;
};

struct EntropyLengthReport {
  std::size_t n = 0;
  std::optional<double> pearson_r;  // between h_mean and length
  std::vector<LengthBucket> buckets;  // non-empty buckets only
};

// Throws std::invalid_argument with fewer than three episodes or a zero
// bucket width.
EntropyLengthReport entropy_length_report(std::span<const EpisodeStats> episodes,
                                          std::size_t bucket_width = 8);

struct PhaseEntropyReport {
  std::size_t n = 0;
  double mean_h_think = 0.0;
  double mean_h_answer = 0.0;
  double mean_diff = 0.0;  // paired h_think - h_answer
};

struct PhaseShift {
  PhaseEntropyReport before;
  PhaseEntropyReport after;
  double drop_think = 0.0;   // before - after
  double drop_answer = 0.0;
};

// Throws std::invalid_argument on an empty set.
PhaseEntropyReport phase_entropy_report(std::span<const EpisodeStats> episodes);
PhaseShift phase_entropy_shift(std::span<const EpisodeStats> before,
                               std::span<const EpisodeStats> after);

struct StepTable {
  std::size_t n = 0;
  double mean_steps_think = 0.0;
  double mean_steps_answer = 0.0;
  double mean_tokens_per_step_think = 0.0;
  double mean_tokens_per_step_answer = 0.0;
};

StepTable step_stats(std::span<const EpisodeStats> episodes);

// Indices of the ceil(fraction * n) lowest entries, ties broken by earlier
// index, returned in ascending index order. Throws std::invalid_argument
// unless fraction is in (0, 1].
std::vector<std::size_t> select_low_entropy(std::span<const double> entropies,
                                            double fraction);

struct FilterResult {
  double retain_fraction = 0.0;
  std::size_t n = 0;
  double accuracy = 0.0;
  double mean_len = 0.0;
  double mean_answer_len = 0.0;
  double mean_think_kept = 0.0;
};

// Per task: sample a full response; keep the lowest-entropy share of the
// tokens between <think> and </think>; then regenerate the answer from
// prompt + <think> + kept + </think> with the answer stream of the original
// draw. Responses that never closed the thinking phase keep their original
// verdict and length. Task i uses the streams of rollout_episodes.
FilterResult entropy_filter_experiment(const PolicyParams& params,
                                       std::span<const Task> tasks, double retain_fraction,
                                       const SamplerConfig& sampler_cfg, std::uint64_t seed,
                                       std::size_t workers);

struct SweepRow {
  std::string label;  // "alpha=<a>" or "binary"
  RewardKind reward = RewardKind::kPear;
  double alpha = 0.0;
  double accuracy = 0.0;
  double mean_len = 0.0;
  double h_think = 0.0;
  double h_answer = 0.0;
};

struct SweepConfig {
  std::vector<double> alphas = {-1.0, 0.0, 1.0, 2.0, 4.0};
  bool include_binary = true;
  RewardConfig reward;  // alpha is overridden per row
  TrainConfig train;
  SamplerConfig sampler;
  std::vector<int> train_difficulties = kTrainDifficulties;
  std::uint64_t eval_seed = 0;
};

// Trains from `base` once per alpha (and once with the binary reward) under
// identical seeds, then evaluates each result on `eval_tasks`.
std::vector<SweepRow> alpha_sweep(const PolicyParams& base, std::span<const Task> eval_tasks,
                                  const SweepConfig& cfg);

// Comma-separated tables with a fixed header line.
void write_eval_csv(std::ostream& out, std::span<const EvalRow> rows);
void write_entropy_length_csv(std::ostream& out, const EntropyLengthReport& report);
// n,pearson_r with "undefined" for a constant series.
void write_correlation_csv(std::ostream& out, const EntropyLengthReport& report);
void write_phase_csv(std::ostream& out, const PhaseEntropyReport& report);
void write_phase_shift_csv(std::ostream& out, const PhaseShift& shift);
void write_step_csv(std::ostream& out, std::span<const StepTable> rows,
                    std::span<const std::string> labels);
void write_filter_csv(std::ostream& out, std::span<const FilterResult> rows);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace pear
