// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "pear/analysis/analysis.hpp"
#include "pear/parallel.hpp"

namespace pear {

namespace {

std::size_t count_steps(std::span<const TokenId> span, TokenId sep) {
  if (span.empty()) return 0;
  return 1 + static_cast<std::size_t>(std::count(span.begin(), span.end(), sep));
}

}  // namespace

EpisodeStats episode_stats(const Response& resp, std::span<const double> entropies,
                           VerdictKind verdict, const Vocab& vocab, int difficulty) {
  const PhaseEntropy pe = phase_entropies(resp, entropies);
  const PhaseSpans spans = segment_phases(resp);
  const auto gen = resp.generated();
  EpisodeStats s;
  s.length = resp.length();
  s.think_len = pe.think_len;
  s.answer_len = pe.answer_len;
  s.h_mean = pe.h_mean;
  s.h_think = pe.h_think;
  s.h_answer = pe.h_answer;
  s.verdict = verdict;
  s.difficulty = difficulty;
  s.steps_think = count_steps(gen.subspan(spans.think.begin, spans.think.size()), vocab.step_sep);
  s.steps_answer =
      count_steps(gen.subspan(spans.answer.begin, spans.answer.size()), vocab.step_sep);
  s.tokens_per_step_think = static_cast<double>(s.think_len) /
                            static_cast<double>(std::max<std::size_t>(1, s.steps_think));
  s.tokens_per_step_answer = static_cast<double>(s.answer_len) /
                             static_cast<double>(std::max<std::size_t>(1, s.steps_answer));
  return s;
}

std::vector<Episode> rollout_episodes(const PolicyParams& params, std::span<const Task> tasks,
                                      const SamplerConfig& sampler_cfg, std::uint64_t seed,
                                      std::size_t workers) {
  sampler_cfg.validate();
  std::vector<Episode> out(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    auto streams = SampleStreams::from_seed(derive_seed(seed, {i}));
    Rollout r = sample_response(params, tasks[i].prompt_tokens, sampler_cfg, streams);
    const Verdict v = verify(r.response, tasks[i], params.vocab());
    out[i].stats = episode_stats(r.response, r.entropies, v.kind, params.vocab(),
                                 tasks[i].difficulty);
    out[i].trace = TraceRecord::from(r.response, std::move(r.entropies));
  });
  return out;
}

std::vector<EvalRow> eval_table(std::span<const Episode> episodes) {
  if (episodes.empty()) throw std::invalid_argument("no episodes to evaluate");
  auto add = [](EvalRow& row, const EpisodeStats& s) {
    ++row.n;
    row.accuracy += s.verdict == VerdictKind::kCorrect ? 1.0 : 0.0;
    row.mean_len += static_cast<double>(s.length);
    row.mean_think_len += static_cast<double>(s.think_len);
    row.mean_answer_len += static_cast<double>(s.answer_len);
  };
  std::map<int, EvalRow> by_difficulty;
  EvalRow all;
  all.difficulty = "all";
  for (const Episode& e : episodes) {
    EvalRow& row = by_difficulty[e.stats.difficulty];
    row.difficulty = std::to_string(e.stats.difficulty);
    add(row, e.stats);
    add(all, e.stats);
  }
  std::vector<EvalRow> rows;
  for (auto& [d, row] : by_difficulty) rows.push_back(row);
  rows.push_back(all);
  for (EvalRow& row : rows) {
    const double n = static_cast<double>(row.n);
    row.accuracy /= n;
    row.mean_len /= n;
    row.mean_think_len /= n;
    row.mean_answer_len /= n;
  }
  return rows;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("series differ in length");
  if (x.size() < 2) throw std::invalid_argument("need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace pear
