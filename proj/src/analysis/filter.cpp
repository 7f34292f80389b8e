// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pear/analysis/analysis.hpp"
#include "pear/parallel.hpp"

namespace pear {

std::vector<std::size_t> select_low_entropy(std::span<const double> entropies,
                                            double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("retain fraction must be in (0, 1]");
  }
  const std::size_t n = entropies.size();
  // The slack keeps products like 0.8 * 10 from rounding up to 9.
  const auto keep = std::min(
      n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entropies[a] < entropies[b];
  });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

namespace {

struct FilterOutcome {
  bool correct = false;
  std::size_t length = 0;
  std::size_t answer_len = 0;
  std::size_t think_kept = 0;
};

}  // namespace

FilterResult entropy_filter_experiment(const PolicyParams& params,
                                       std::span<const Task> tasks, double retain_fraction,
                                       const SamplerConfig& sampler_cfg, std::uint64_t seed,
                                       std::size_t workers) {
  if (!(retain_fraction > 0.0 && retain_fraction <= 1.0)) {
    throw std::invalid_argument("retain fraction must be in (0, 1]");
  }
  sampler_cfg.validate();
  const Vocab& vocab = params.vocab();
  std::vector<FilterOutcome> outcomes(tasks.size());

  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const Task& task = tasks[i];
    const std::uint64_t s = derive_seed(seed, {i});
    auto streams = SampleStreams::from_seed(s);
    const Rollout original = sample_response(params, task.prompt_tokens, sampler_cfg, streams);
    const Response& resp = original.response;
    FilterOutcome& out = outcomes[i];
    if (!resp.has_close()) {
      out.correct = verify(resp, task, vocab).correct();
      out.length = resp.length();
      return;
    }

    const auto gen = resp.generated();
    const TokenRange think = segment_phases(resp).think;
    // The opening marker is rebuilt unconditionally, so it is not a candidate.
    const std::size_t first = !think.empty() && gen[think.begin] == vocab.think_open
                                  ? think.begin + 1
                                  : think.begin;
    const std::span<const double> ents(original.entropies.data() + first, think.end - first);
    const auto kept = select_low_entropy(ents, retain_fraction);

    std::vector<TokenId> prefix{vocab.think_open};
    for (std::size_t j : kept) prefix.push_back(gen[first + j]);
    prefix.push_back(vocab.think_close);

    auto replay = SampleStreams::from_seed(s);
    const Rollout rebuilt =
        continue_response(params, task.prompt_tokens, prefix, sampler_cfg, replay);
    out.correct = verify(rebuilt.response, task, vocab).correct();
    out.length = rebuilt.response.length();
    out.answer_len = segment_phases(rebuilt.response).answer.size();
    out.think_kept = kept.size();
  });

  FilterResult r;
  r.retain_fraction = retain_fraction;
  r.n = tasks.size();
  if (tasks.empty()) return r;
  for (const FilterOutcome& o : outcomes) {
    r.accuracy += o.correct ? 1.0 : 0.0;
    r.mean_len += static_cast<double>(o.length);
    r.mean_answer_len += static_cast<double>(o.answer_len);
    r.mean_think_kept += static_cast<double>(o.think_kept);
  }
  const double n = static_cast<double>(r.n);
  r.accuracy /= n;
  r.mean_len /= n;
  r.mean_answer_len /= n;
  r.mean_think_kept /= n;
  return r;
}

}  // namespace pear
