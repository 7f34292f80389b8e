// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pear/core/entropy.hpp"
#include "pear/core/language.hpp"
#include "pear/core/response.hpp"
#include "pear/core/trace_io.hpp"
#include "pear/env/env.hpp"

namespace pear {
namespace {

using testing::toks;
using testing::vocab;

TEST(Vocab, StandardLayout) {
  const Vocab& v = vocab();
  EXPECT_NO_THROW(v.validate());
  EXPECT_EQ(v.size, 25u);
  EXPECT_LE(v.size, Vocab::kMaxSize);
  EXPECT_EQ(v.digit(7), toks({"7"})[0]);
  EXPECT_EQ(v.digit_value(v.digit(3)), 3);
  EXPECT_TRUE(v.is_filler(toks({"hmm"})[0]));
  EXPECT_TRUE(v.is_operator(v.minus));
  EXPECT_FALSE(v.is_operator(v.equals));
  EXPECT_EQ(v.render(toks({"<think>", "4", "+", "5"})), "<think> 4 + 5");
  Vocab broken = v;
  broken.think_close = broken.think_open;
  EXPECT_THROW(broken.validate(), std::invalid_argument);
}

TEST(Response, CloseIndexIsOneBased) {
  const auto prompt = toks({"<bos>", "2", "+", "3", "?"});
  auto seq = prompt;
  for (auto t : toks({"<think>", "2", "+", "3", "=", "5", "</think>", "5", "<eos>"})) {
    seq.push_back(t);
  }
  const Response r(seq, prompt.size(), vocab());
  EXPECT_EQ(r.length(), 9u);
  EXPECT_TRUE(r.has_close());
  EXPECT_EQ(r.close_index(), 7u);
  const PhaseSpans s = segment_phases(r);
  EXPECT_EQ(s.think, (TokenRange{0, 6}));
  EXPECT_EQ(s.answer, (TokenRange{7, 9}));
}

TEST(Response, MissingCloseSetsKToT) {
  const auto prompt = toks({"<bos>", "2", "?"});
  auto seq = prompt;
  for (auto t : toks({"<think>", "2", "+", "hmm"})) seq.push_back(t);
  const Response r(seq, prompt.size(), vocab());
  EXPECT_FALSE(r.has_close());
  EXPECT_EQ(r.close_index(), r.length());
  const PhaseSpans s = segment_phases(r);
  EXPECT_EQ(s.think, (TokenRange{0, 3}));
  EXPECT_TRUE(s.answer.empty());
}

TEST(Response, RejectsEmptyGenerationAndUnknownTokens) {
  const auto prompt = toks({"<bos>", "2", "?"});
  EXPECT_THROW(Response(prompt, prompt.size(), vocab()), std::invalid_argument);
  auto bad = prompt;
  bad.push_back(99);
  EXPECT_THROW(Response(bad, prompt.size(), vocab()), std::invalid_argument);
}

TEST(Entropy, TabulatedValues) {
  EXPECT_NEAR(token_entropy(Distribution({0.5, 0.5})), std::log(2.0), 1e-12);
  EXPECT_EQ(token_entropy(Distribution({0.0, 1.0, 0.0})), 0.0);
  std::vector<double> uniform(25, 1.0 / 25);
  EXPECT_NEAR(token_entropy(Distribution(uniform)), std::log(25.0), 1e-12);
  // -(0.7 ln 0.7 + 0.2 ln 0.2 + 0.1 ln 0.1)
  EXPECT_NEAR(token_entropy(Distribution({0.7, 0.2, 0.1})), 0.8018185525433373, 1e-12);
  EXPECT_THROW(Distribution({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(Distribution({1.2, -0.2}), std::invalid_argument);
}

TEST(Entropy, PhaseAverageExamples) {
  const auto prompt = toks({"<bos>", "2", "?"});
  auto seq = prompt;
  for (auto t : toks({"<think>", "2", "</think>", "2"})) seq.push_back(t);
  const Response r(seq, prompt.size(), vocab());
  // k = 3: positions 1-2 think, 4 answer, the boundary entropy 0.1 in neither.
  const PhaseEntropy pe = phase_entropies(r, std::vector<double>{0.8, 0.6, 0.1, 0.2});
  EXPECT_NEAR(pe.h_think, 0.7, 1e-12);
  EXPECT_NEAR(pe.h_answer, 0.2, 1e-12);
  EXPECT_NEAR(pe.h_mean, 0.425, 1e-12);
  const PhaseEntropy zero = phase_entropies(r, std::vector<double>(4, 0.0));
  EXPECT_EQ(zero.h_think, 0.0);
  EXPECT_EQ(zero.h_answer, 0.0);
  EXPECT_EQ(zero.h_mean, 0.0);

  // A lone </think>: both phases empty.
  auto lone = prompt;
  lone.push_back(vocab().think_close);
  const PhaseSpans spans = segment_phases(Response(lone, prompt.size(), vocab()));
  EXPECT_TRUE(spans.think.empty());
  EXPECT_TRUE(spans.answer.empty());
}

TEST(Entropy, FuzzAgainstOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& x : p) {
      x = rng.bernoulli(0.2) ? 0.0 : std::pow(rng.uniform(), 3.0);
      s += x;
    }
    if (s == 0.0) p[0] = s = 1.0;
    for (auto& x : p) x /= s;
    const double h = token_entropy(Distribution(p));
    ASSERT_NEAR(h, static_cast<double>(oracle::entropy(p)), 1e-9);
    ASSERT_GE(h, 0.0);
    ASSERT_LE(h, std::log(static_cast<double>(n)) + 1e-12);
  }
}

// Random generated sequences, some with a </think> marker.
Response random_response(Rng& rng, std::vector<double>& h) {
  const auto prompt = toks({"<bos>", "3", "?"});
  auto seq = prompt;
  const std::size_t t = 1 + rng.below(30);
  const bool close = rng.bernoulli(0.7);
  const std::size_t k = close ? rng.below(t) : t;
  for (std::size_t i = 0; i < t; ++i) {
    TokenId tok = static_cast<TokenId>(rng.below(vocab().size));
    if (tok == vocab().think_close) tok = vocab().step_sep;
    if (close && i == k) tok = vocab().think_close;
    seq.push_back(tok);
  }
  h.resize(t);
  for (auto& x : h) x = rng.uniform() * 2.0;
  return Response(seq, prompt.size(), vocab());
}

TEST(Entropy, PhaseAveragesMatchOracle) {
  Rng rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> h;
    const Response r = random_response(rng, h);
    const PhaseEntropy pe = phase_entropies(r, h);
    const auto o = oracle::phases(h, r.close_index(), r.has_close());
    ASSERT_NEAR(pe.h_think, static_cast<double>(o.think), 1e-12);
    ASSERT_NEAR(pe.h_answer, static_cast<double>(o.answer), 1e-12);
    ASSERT_NEAR(pe.h_mean, static_cast<double>(o.mean), 1e-12);
    // The boundary position k belongs to neither phase but counts in the mean.
    const std::size_t k = r.close_index(), t = r.length();
    const double rebuilt = pe.h_think * static_cast<double>(k - 1) + h[k - 1] +
                           pe.h_answer * static_cast<double>(t - k);
    ASSERT_NEAR(pe.h_mean * static_cast<double>(t), rebuilt, 1e-9);
    if (!r.has_close()) {
      ASSERT_EQ(pe.h_answer, 0.0);
    }
  }
  std::vector<double> h;
  const Response r = random_response(rng, h);
  h.pop_back();
  EXPECT_THROW(phase_entropies(r, h), std::invalid_argument);
}

TEST(Language, ValuesRoundTrip) {
  Rng rng(5);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::int64_t v = rng.between(-999999, 999999);
    const auto tokens = render_value(v, vocab());
    ASSERT_EQ(parse_value(tokens, vocab()), v);
  }
  EXPECT_EQ(render_value(-40, vocab()), toks({"-", "4", "0"}));
  EXPECT_FALSE(parse_value(std::vector<TokenId>{}, vocab()));
  EXPECT_FALSE(parse_value(toks({"-"}), vocab()));
  EXPECT_FALSE(parse_value(toks({"-", "-", "1"}), vocab()));
  EXPECT_FALSE(parse_value(toks({"4", "<eos>"}), vocab()));
  EXPECT_FALSE(parse_value(std::vector<TokenId>(13, vocab().digit(1)), vocab()));
}

TEST(Language, PromptsRoundTripAndEvaluateLeftToRight) {
  Expression e{3, {Op::kAdd, Op::kMul, Op::kSub}, {4, 2, 9}};
  EXPECT_EQ(e.evaluate(), (3 + 4) * 2 - 9);
  const auto prompt = render_prompt(e, vocab());
  EXPECT_EQ(prompt, toks({"<bos>", "3", "+", "4", "*", "2", "-", "9", "?"}));
  EXPECT_EQ(parse_prompt(prompt, vocab()), e);
  EXPECT_FALSE(parse_prompt(toks({"<bos>", "3", "+", "?"}), vocab()));
  EXPECT_FALSE(parse_prompt(toks({"3", "+", "4", "?"}), vocab()));
}

TEST(Tracker, PredictsEveryDeterministicTeacherToken) {
  // Apart from the choice made at the start of each segment, a teacher trace
  // is exactly the canonical continuation.
  Rng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const Task task = generate_task(2 + static_cast<int>(rng.below(5)), rng, vocab());
    const auto trace = teacher_trace(task, 1.0 + rng.uniform() * 3.0, rng, vocab());
    ScratchpadTracker tr(vocab());
    tr.push(task.prompt_tokens);
    ASSERT_EQ(tr.phase(), Phase::kPrompt);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const bool seg_start =
          i > 0 && (trace[i - 1] == vocab().step_sep || trace[i - 1] == vocab().think_open);
      const bool restates = seg_start && vocab().is_filler(trace[i]);
      if (!restates) {
        ASSERT_EQ(tr.expected_next(), trace[i]) << vocab().render(trace) << " at " << i;
      }
      tr.push(trace[i]);
    }
    ASSERT_EQ(tr.phase(), Phase::kAnswer);
  }
}

TEST(Tracker, OffGrammarContextsHaveNoCue) {
  ScratchpadTracker tr(vocab());
  tr.push(toks({"<bos>", "2", "+", "3", "?", "<think>", "7"}));
  EXPECT_FALSE(tr.expected_next());
  tr.push(vocab().step_sep);
  // The garbled segment starts with a digit, so it counts as the real step.
  EXPECT_EQ(tr.expected_next(), vocab().think_close);

  ScratchpadTracker no_open(vocab());
  no_open.push(toks({"<bos>", "2", "+", "3", "?", "2"}));
  EXPECT_FALSE(no_open.expected_next());
  EXPECT_EQ(no_open.phase(), Phase::kPrompt);

  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    ScratchpadTracker t(vocab());
    t.push(toks({"<bos>", "4", "*", "5", "?"}));
    for (int i = 0; i < 30; ++i) {
      (void)t.expected_next();
      t.push(static_cast<TokenId>(rng.below(vocab().size)));
    }
    ASSERT_EQ(t.size(), 35u);
  }
}

TEST(TraceIo, RoundTripsAndRejectsGarbage) {
  const auto prompt = toks({"<bos>", "2", "?"});
  auto seq = prompt;
  for (auto t : toks({"<think>", "2", "</think>", "2", "<eos>"})) seq.push_back(t);
  const Response r(seq, prompt.size(), vocab());
  const TraceRecord rec = TraceRecord::from(r, {0.1, 0.25, 1e-17, 0.3, 2.0 / 3.0});
  EXPECT_EQ(rec.close_index, 3u);
  std::stringstream ss;
  write_traces(ss, {rec, rec});
  const auto back = read_traces(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], rec);
  EXPECT_EQ(back[0].response(vocab()).sequence(), seq);
  EXPECT_THROW(trace_from_json_line("{\"tokens\": [1]}"), std::invalid_argument);
  EXPECT_THROW(trace_from_json_line("not json"), std::invalid_argument);
}

}  // namespace
}  // namespace pear
