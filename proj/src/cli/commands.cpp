// SPDX-License-Identifier: Apache-2.0
#include "pear/cli/commands.hpp"

#include <fstream>

#include "json.hpp"
#include "pear/error.hpp"
#include "pear/log.hpp"
#include "pear/policy/checkpoint.hpp"

namespace pear {

namespace fs = std::filesystem;

namespace {

class OutputFile {
 public:
  OutputFile(const RunConfig& cfg, const std::string& name) : path_(cfg.out / name) {
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw ArtifactError("cannot write " + path_.string());
  }
  ~OutputFile() = default;

  std::ostream& stream() { return out_; }

  void close() {
    out_.close();
    if (!out_) throw ArtifactError("failed writing " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

void prepare_out(const RunConfig& cfg) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw ArtifactError("cannot create output directory " + cfg.out.string());
  OutputFile f(cfg, "config.txt");
  cfg.write(f.stream());
  f.close();
}

TrainConfig train_config(const RunConfig& cfg) {
  TrainConfig t = cfg.train;
  t.seed = cfg.seed;
  t.workers = cfg.resolved_workers();
  return t;
}

PolicyParams load_policy(const fs::path& checkpoint) {
  if (checkpoint.empty()) throw ArtifactError("no checkpoint given");
  return load_checkpoint(checkpoint, Vocab::standard());
}

std::vector<EpisodeStats> stats_of(std::span<const Episode> episodes) {
  std::vector<EpisodeStats> out;
  out.reserve(episodes.size());
  for (const Episode& e : episodes) out.push_back(e.stats);
  return out;
}

// Episodes for the analysis reports: read from cfg.traces when set (no
// verdicts available), otherwise sampled from the checkpoint.
std::vector<EpisodeStats> analysis_episodes(const RunConfig& cfg, const fs::path& checkpoint,
                                            std::size_t count) {
  const Vocab vocab = Vocab::standard();
  if (!cfg.traces.empty()) {
    std::ifstream in(cfg.traces);
    if (!in) throw ArtifactError("cannot open traces " + cfg.traces.string());
    std::vector<EpisodeStats> out;
    try {
      for (const TraceRecord& rec : read_traces(in)) {
        out.push_back(episode_stats(rec.response(vocab), rec.entropies,
                                    VerdictKind::kMalformed, vocab));
      }
    } catch (const std::invalid_argument& e) {
      throw ArtifactError(std::string("bad trace file: ") + e.what());
    }
    return out;
  }
  const PolicyParams params = load_policy(checkpoint);
  RunConfig sized = cfg;
  sized.eval_count = count;
  const auto tasks = load_split(sized, vocab);
  return stats_of(
      rollout_episodes(params, tasks, cfg.sampler, cfg.eval_seed, cfg.resolved_workers()));
}

}  // namespace

std::vector<Task> load_split(const RunConfig& cfg, const Vocab& vocab) {
  std::vector<Task> tasks;
  if (cfg.eval_split == "id" || cfg.eval_split == "ood") {
    tasks = split_tasks(named_split(cfg.eval_split, cfg.eval_count), vocab);
  } else {
    std::ifstream in(cfg.eval_split);
    if (!in) throw ArtifactError("cannot open task file " + cfg.eval_split);
    try {
      tasks = read_tasks(in);
    } catch (const std::invalid_argument& e) {
      throw ArtifactError(std::string("bad task file: ") + e.what());
    }
  }
  if (tasks.empty()) throw ConfigError("evaluation split '" + cfg.eval_split + "' is empty");
  return tasks;
}

void cmd_pretrain(const RunConfig& cfg) {
  prepare_out(cfg);
  const Vocab vocab = Vocab::standard();
  const auto corpus = teacher_corpus(cfg.train_difficulties, cfg.pretrain_corpus,
                                     cfg.verbosity, cfg.seed, vocab);
  SftConfig sft = cfg.pretrain;
  sft.workers = cfg.resolved_workers();
  spdlog::info("pretraining on {} teacher traces for {} epochs", corpus.size(), sft.epochs);
  const SftResult res = sft_pretrain(PolicyParams::zeros(vocab), corpus, sft);
  spdlog::info("pretraining loss {:.4f} -> {:.4f}", res.losses.front(), res.losses.back());

  OutputFile loss(cfg, "pretrain_loss.jsonl");
  for (std::size_t e = 0; e < res.losses.size(); ++e) {
    loss.stream() << nlohmann::ordered_json{{"epoch", e}, {"loss", res.losses[e]}}.dump()
                  << '\n';
  }
  loss.close();
  save_checkpoint(res.params, cfg.out / "policy.ckpt");
}

void cmd_train(const RunConfig& cfg, const fs::path& checkpoint) {
  const PolicyParams init = load_policy(checkpoint);
  prepare_out(cfg);
  const RewardFn reward{cfg.reward_kind, cfg.reward};
  OutputFile metrics(cfg, "metrics.jsonl");
  OutputFile audit(cfg, "audit.jsonl");
  spdlog::info("training with {} reward for {} steps", to_string(reward.kind), cfg.train.steps);
  const TrainResult res = train_loop(init, cfg.train_difficulties, reward, train_config(cfg),
                                     cfg.sampler, {&metrics.stream(), &audit.stream()});
  metrics.close();
  audit.close();
  if (!res.metrics.empty()) {
    const StepMetrics& m = res.metrics.back();
    spdlog::info("final step: acc {:.3f} len {:.2f} reward {:.4f}", m.acc, m.len_mean,
                 m.reward_mean);
  }
  save_checkpoint(res.params, cfg.out / "policy.ckpt");
}

std::vector<EvalRow> cmd_eval(const RunConfig& cfg, const fs::path& checkpoint) {
  const PolicyParams params = load_policy(checkpoint);
  const auto tasks = load_split(cfg, params.vocab());
  prepare_out(cfg);
  const auto episodes =
      rollout_episodes(params, tasks, cfg.sampler, cfg.eval_seed, cfg.resolved_workers());
  const auto rows = eval_table(episodes);

  OutputFile table(cfg, "eval.csv");
  write_eval_csv(table.stream(), rows);
  table.close();
  OutputFile traces(cfg, "traces.jsonl");
  for (const Episode& e : episodes) traces.stream() << to_json_line(e.trace) << '\n';
  traces.close();
  const EvalRow& all = rows.back();
  spdlog::info("eval {}: n {} acc {:.3f} tokens {:.2f}", cfg.eval_split, all.n, all.accuracy,
               all.mean_len);
  return rows;
}

void cmd_analyze(const RunConfig& cfg, const fs::path& checkpoint) {
  const std::string& x = cfg.experiment;
  if (x != "corr" && x != "phases" && x != "filter" && x != "steps" && x != "alpha") {
    throw ConfigError("unknown experiment '" + x +
                      "' (expected corr, phases, filter, steps or alpha)");
  }
  if (x == "alpha") {
    cmd_sweep(cfg, checkpoint);
    return;
  }
  prepare_out(cfg);

  if (x == "corr") {
    const auto eps = analysis_episodes(cfg, checkpoint, cfg.analyze_episodes);
    const auto report = entropy_length_report(eps);
    OutputFile bins(cfg, "corr.csv");
    write_entropy_length_csv(bins.stream(), report);
    bins.close();
    OutputFile summary(cfg, "corr_summary.csv");
    write_correlation_csv(summary.stream(), report);
    summary.close();
    if (report.pearson_r) {
      spdlog::info("pearson r(h_mean, length) = {:.4f} over {}", *report.pearson_r, report.n);
    } else {
      spdlog::info("pearson r undefined (constant series)");
    }
  } else if (x == "phases" || x == "steps") {
    const auto after = analysis_episodes(cfg, checkpoint, cfg.eval_count);
    std::vector<EpisodeStats> before;
    if (!cfg.baseline_checkpoint.empty()) {
      RunConfig base = cfg;
      base.traces.clear();
      before = analysis_episodes(base, cfg.baseline_checkpoint, cfg.eval_count);
    }
    if (x == "phases") {
      if (before.empty()) {
        OutputFile f(cfg, "phases.csv");
        write_phase_csv(f.stream(), phase_entropy_report(after));
        f.close();
      } else {
        const PhaseShift shift = phase_entropy_shift(before, after);
        OutputFile f(cfg, "phase_shift.csv");
        write_phase_shift_csv(f.stream(), shift);
        f.close();
        spdlog::info("entropy drop: think {:.4f} answer {:.4f}", shift.drop_think,
                     shift.drop_answer);
      }
    } else {
      std::vector<StepTable> rows;
      std::vector<std::string> labels;
      if (!before.empty()) {
        rows.push_back(step_stats(before));
        labels.emplace_back("before");
      }
      rows.push_back(step_stats(after));
      labels.emplace_back(before.empty() ? "policy" : "after");
      OutputFile f(cfg, "steps.csv");
      write_step_csv(f.stream(), rows, labels);
      f.close();
    }
  } else {
    const PolicyParams params = load_policy(checkpoint);
    const auto tasks = load_split(cfg, params.vocab());
    std::vector<FilterResult> rows;
    for (double fraction : cfg.retain_fractions) {
      rows.push_back(entropy_filter_experiment(params, tasks, fraction, cfg.sampler,
                                               cfg.eval_seed, cfg.resolved_workers()));
      spdlog::info("retain {:.2f}: acc {:.3f} len {:.2f}", fraction, rows.back().accuracy,
                   rows.back().mean_len);
    }
    OutputFile f(cfg, "filter.csv");
    write_filter_csv(f.stream(), rows);
    f.close();
  }
}

std::vector<SweepRow> cmd_sweep(const RunConfig& cfg, const fs::path& checkpoint) {
  const PolicyParams base = load_policy(checkpoint);
  const auto tasks = load_split(cfg, base.vocab());
  prepare_out(cfg);
  SweepConfig sweep;
  sweep.alphas = cfg.sweep_alphas;
  sweep.include_binary = cfg.sweep_include_binary;
  sweep.reward = cfg.reward;
  sweep.train = train_config(cfg);
  sweep.sampler = cfg.sampler;
  sweep.train_difficulties = cfg.train_difficulties;
  sweep.eval_seed = cfg.eval_seed;
  const auto rows = alpha_sweep(base, tasks, sweep);
  OutputFile f(cfg, "sweep.csv");
  write_sweep_csv(f.stream(), rows);
  f.close();
  for (const SweepRow& r : rows) {
    spdlog::info("{}: acc {:.3f} len {:.2f}", r.label, r.accuracy, r.mean_len);
  }
  return rows;
}

}  // namespace pear
