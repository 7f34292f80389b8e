// SPDX-License-Identifier: Apache-2.0
// pear: pretrain, train, eval, analyze, sweep.
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pear/cli/commands.hpp"
#include "pear/error.hpp"
#include "pear/log.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitArtifact = 3;
constexpr int kExitNumerical = 4;

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> reward;
  std::optional<double> alpha;
  std::optional<double> retain_fraction;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> steps;
  std::string checkpoint;
  std::optional<std::string> split;
  bool entropy_at_sample_temp = false;
  std::vector<std::string> overrides;
  std::string experiment;
};

pear::RunConfig resolve(const Flags& f) {
  pear::RunConfig cfg;
  if (!f.config.empty()) pear::apply_config_file(cfg, f.config);
  for (const auto& o : f.overrides) pear::apply_override(cfg, o);
  if (f.out) cfg.set("out", *f.out);
  if (f.seed) cfg.seed = *f.seed;
  if (f.reward) cfg.set("reward.kind", *f.reward);
  if (f.alpha) cfg.reward.alpha = *f.alpha;
  if (f.retain_fraction) cfg.retain_fractions = {*f.retain_fraction};
  if (f.workers) cfg.workers = *f.workers;
  if (f.steps) cfg.train.steps = *f.steps;
  if (f.split) cfg.eval_split = *f.split;
  if (f.entropy_at_sample_temp) cfg.sampler.entropy_at_sample_temp = true;
  if (!f.experiment.empty()) cfg.experiment = f.experiment;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  if (!pear::init_logging()) {
    std::fprintf(stderr, "PEAR_LOG_LEVEL must be one of error, info, debug\n");
    return kExitConfig;
  }

  CLI::App app{"Phase-entropy-aware GRPO on a synthetic arithmetic task"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "Config file (key = value per line)");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--seed", f.seed, "Run seed");
  app.add_option("--reward", f.reward, "Reward for train: pear or binary");
  app.add_option("--alpha", f.alpha, "Answer-entropy coefficient of the phase penalty");
  app.add_option("--retain-fraction", f.retain_fraction,
                 "Single retained fraction for the filter experiment");
  app.add_option("--workers", f.workers, "Worker threads (0: all cores)");
  app.add_option("--steps", f.steps, "Training steps");
  app.add_option("--checkpoint", f.checkpoint, "Input checkpoint");
  app.add_option("--split", f.split, "Evaluation split: id, ood, or a task file");
  app.add_flag("--entropy-at-sample-temp", f.entropy_at_sample_temp,
               "Reward entropies from the sampling distribution");
  app.add_option("--set", f.overrides, "Config override key=value (repeatable)");

  auto* pretrain = app.add_subcommand("pretrain", "Supervised pretraining on teacher traces");
  auto* train = app.add_subcommand("train", "GRPO training from a checkpoint");
  auto* eval = app.add_subcommand("eval", "Accuracy and length on an evaluation split");
  auto* analyze = app.add_subcommand("analyze", "Entropy analyses");
  analyze->add_option("experiment", f.experiment, "corr, phases, filter, steps or alpha");
  auto* sweep = app.add_subcommand("sweep", "Train once per alpha and evaluate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const pear::RunConfig cfg = resolve(f);
    if (pretrain->parsed()) pear::cmd_pretrain(cfg);
    if (train->parsed()) pear::cmd_train(cfg, f.checkpoint);
    if (eval->parsed()) pear::cmd_eval(cfg, f.checkpoint);
    if (analyze->parsed()) pear::cmd_analyze(cfg, f.checkpoint);
    if (sweep->parsed()) pear::cmd_sweep(cfg, f.checkpoint);
  } catch (const pear::ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kExitConfig;
  } catch (const pear::ArtifactError& e) {
    spdlog::error("artifact error: {}", e.what());
    return kExitArtifact;
  } catch (const pear::NumericalError& e) {
    spdlog::error("numerical failure: {}", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
