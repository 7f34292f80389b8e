// SPDX-License-Identifier: Apache-2.0
#include "pear/grpo/sft.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "pear/error.hpp"
#include "pear/kernels/kernels.hpp"
#include "pear/parallel.hpp"
#include "pear/policy/softmax_policy.hpp"

namespace pear {

std::vector<Demonstration> teacher_corpus(std::span<const int> difficulties,
                                          std::size_t count, double verbosity,
                                          std::uint64_t seed, const Vocab& vocab) {
  const auto tasks = generate_tasks(difficulties, count, derive_seed(seed, {0}), vocab);
  std::vector<Demonstration> corpus;
  corpus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {1, i}));
    corpus.push_back({tasks[i].prompt_tokens, teacher_trace(tasks[i], verbosity, rng, vocab)});
  }
  return corpus;
}

void SftConfig::validate() const {
  if (epochs == 0) throw ConfigError("pretrain.epochs must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("pretrain.learning_rate must be finite and > 0");
  }
  if (workers == 0) throw ConfigError("pretrain.workers must be positive");
}

namespace {

// All positions sharing a feature set share a next-token distribution, so
// the corpus collapses to token counts per distinct context.
struct ContextCounts {
  FeatureSet features;
  std::vector<double> counts;
  double total = 0.0;
};

std::vector<ContextCounts> collapse(const PolicyParams& params,
                                    std::span<const Demonstration> corpus,
                                    double& n_tokens) {
  const Vocab& vocab = params.vocab();
  auto key = [](const FeatureSet& fs) {
    return std::vector<std::uint32_t>(fs.active().begin(), fs.active().end());
  };
  std::map<std::vector<std::uint32_t>, ContextCounts> table;
  n_tokens = 0.0;
  for (const auto& demo : corpus) {
    if (demo.response.empty()) throw std::invalid_argument("empty demonstration");
    ScratchpadTracker tracker(vocab);
    tracker.push(demo.prompt);
    for (TokenId t : demo.response) {
      if (!vocab.contains(t)) throw std::invalid_argument("unknown token id");
      const FeatureSet fs = params.feature_map().from_tracker(tracker);
      auto [it, fresh] = table.try_emplace(key(fs));
      if (fresh) {
        it->second.features = fs;
        it->second.counts.assign(vocab.size, 0.0);
      }
      it->second.counts[t] += 1.0;
      it->second.total += 1.0;
      n_tokens += 1.0;
      tracker.push(t);
    }
  }
  std::vector<ContextCounts> out;
  out.reserve(table.size());
  for (auto& [k, c] : table) out.push_back(std::move(c));
  return out;
}

constexpr std::size_t kBlocks = 32;

}  // namespace

SftResult sft_pretrain(const PolicyParams& init, std::span<const Demonstration> corpus,
                       const SftConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw std::invalid_argument("empty teacher corpus");
  double n_tokens = 0.0;
  const auto contexts = collapse(init, corpus, n_tokens);
  const std::size_t v = init.vocab_size();
  const std::size_t nw = init.weights().size();

  PolicyParams params = init;
  SftResult res{params, {}};
  std::vector<std::vector<double>> block_grad(kBlocks, std::vector<double>(nw));
  std::vector<double> block_loss(kBlocks);
  std::vector<double> grad(nw);

  auto evaluate = [&]() {
    parallel_for(kBlocks, cfg.workers, [&](std::size_t b) {
      std::vector<double> z(v), p(v), dir(v);
      std::fill(block_grad[b].begin(), block_grad[b].end(), 0.0);
      double loss = 0.0;
      for (std::size_t c = b; c < contexts.size(); c += kBlocks) {
        const ContextCounts& cc = contexts[c];
        logits_into(params, cc.features, z);
        softmax_into(z, 1.0, p);
        for (std::size_t j = 0; j < v; ++j) {
          if (cc.counts[j] > 0.0) loss -= cc.counts[j] * std::log(p[j]);
          dir[j] = cc.counts[j] - cc.total * p[j];
        }
        accumulate_outer(cc.features, dir, 1.0 / n_tokens, v, block_grad[b]);
      }
      block_loss[b] = loss / n_tokens;
    });
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    for (std::size_t b = 0; b < kBlocks; ++b) {
      loss += block_loss[b];
      kernels::axpy(1.0, block_grad[b], grad);
    }
    if (!std::isfinite(loss)) throw NumericalError("pretraining loss diverged");
    return loss;
  };

  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    res.losses.push_back(evaluate());
    kernels::axpy(cfg.learning_rate, grad, params.mutable_weights());
  }
  res.losses.push_back(evaluate());
  if (!params.all_finite()) throw NumericalError("pretraining produced non-finite weights");
  res.params = std::move(params);
  return res;
}

}  // namespace pear
