// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pear/env/env.hpp"
#include "pear/error.hpp"
#include "pear/policy/checkpoint.hpp"
#include "pear/policy/sampler.hpp"

namespace pear {
namespace {

using testing::random_params;
using testing::toks;
using testing::vocab;

std::vector<TokenId> random_context(Rng& rng) {
  const Task task = generate_task(2 + static_cast<int>(rng.below(3)), rng, vocab());
  std::vector<TokenId> ctx = task.prompt_tokens;
  const std::size_t extra = rng.below(20);
  if (extra > 0) ctx.push_back(vocab().think_open);
  for (std::size_t i = 1; i < extra; ++i) {
    ctx.push_back(static_cast<TokenId>(rng.below(vocab().size)));
  }
  return ctx;
}

constexpr std::uint64_t kGoldenSnapshotHash = 13417935347281050781ULL;

std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

TEST(Logits, ZeroWeightsGiveZeroLogits) {
  const auto p = PolicyParams::zeros(vocab());
  for (double z : logits(p, toks({"<bos>", "3", "?"}))) EXPECT_EQ(z, 0.0);
}

TEST(Logits, SingleFeatureIdentity) {
  auto p = PolicyParams::zeros(vocab());
  const auto ctx = toks({"<bos>", "3", "?"});
  const FeatureSet fs = p.feature_map().features(ctx);
  const std::uint32_t f = fs.active()[0];
  p.at(f, 5) = 1.0;
  const auto z = logits(p, ctx);
  for (TokenId v = 0; v < vocab().size; ++v) EXPECT_EQ(z[v], v == 5 ? 1.0 : 0.0);
}

TEST(Logits, FuzzAgainstFeatureSumOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng.next(), 2.0);
    const auto ctx = random_context(rng);
    const FeatureSet fs = p.feature_map().features(ctx);
    const std::vector<std::uint32_t> rows(fs.active().begin(), fs.active().end());
    const auto want = oracle::logits(as_vector(p.weights()), vocab().size, rows);
    const auto got = logits(p, ctx);
    for (std::size_t v = 0; v < got.size(); ++v) ASSERT_NEAR(got[v], want[v], 1e-12);
  }
  EXPECT_THROW(logits(PolicyParams::zeros(vocab()), std::vector<TokenId>{}),
               std::invalid_argument);
  EXPECT_THROW(logits(PolicyParams::zeros(vocab()), std::vector<TokenId>{2, 77}),
               std::invalid_argument);
}

TEST(Features, IncrementalTrackerMatchesFromScratch) {
  Rng rng(2);
  const FeatureMap map(vocab());
  for (int trial = 0; trial < 300; ++trial) {
    const auto ctx = random_context(rng);
    ScratchpadTracker tr(vocab());
    for (std::size_t n = 1; n <= ctx.size(); ++n) {
      tr.push(ctx[n - 1]);
      ASSERT_EQ(map.from_tracker(tr), map.features({ctx.data(), n}));
    }
  }
}

TEST(Features, LayoutIsStable) {
  const FeatureMap map(vocab());
  EXPECT_EQ(map.num_features(), 3 * vocab().size + 8);
  EXPECT_EQ(map.digest(), FeatureMap(Vocab::standard()).digest());
  EXPECT_FALSE(map.describe().empty());
  for (std::size_t pos = 0; pos < 100; ++pos) EXPECT_LT(FeatureMap::bucket(pos), FeatureMap::kBuckets);
}

TEST(Distribution, SoftmaxMatchesOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng.next(), 3.0);
    const auto ctx = random_context(rng);
    const double temp = 0.1 + rng.uniform() * 2.0;
    const Distribution d = distribution(p, ctx, temp);
    const auto want = oracle::softmax(logits(p, ctx), temp);
    for (std::size_t v = 0; v < d.size(); ++v) ASSERT_NEAR(d[v], static_cast<double>(want[v]), 1e-12);
  }
  EXPECT_THROW(distribution(PolicyParams::zeros(vocab()), toks({"<bos>"}), 0.0),
               std::invalid_argument);
}

TEST(Distribution, LimitCases) {
  const std::vector<double> flat(25, 0.3);
  std::vector<double> p(25);
  softmax_into(flat, 0.6, p);
  for (double x : p) EXPECT_NEAR(x, 1.0 / 25, 1e-15);
  std::vector<double> z(25);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = 5.0 - 1000.0 * static_cast<double>(i);
  softmax_into(z, 1.0, p);
  EXPECT_NEAR(p[0], 1.0, 1e-9);
  // Hotter is flatter: the largest probability falls with temperature.
  Rng rng(12);
  for (auto& x : z) x = rng.uniform() * 4.0;
  double last = 1.0;
  for (double t : {1.0, 10.0, 100.0}) {
    softmax_into(z, t, p);
    const double top = *std::max_element(p.begin(), p.end());
    EXPECT_LT(top, last);
    last = top;
  }
  EXPECT_NEAR(last, 1.0 / 25, 2e-3);
}

TEST(Nucleus, HandSortedExample) {
  EXPECT_EQ(nucleus(std::vector<double>{0.6, 0.2, 0.1, 0.1}, 0.5), NucleusMask{1});
  EXPECT_EQ(nucleus(std::vector<double>{0.1, 0.2, 0.6, 0.1}, 0.7), NucleusMask{0b0110});
  // Equal mass: the lower id enters first.
  EXPECT_EQ(nucleus(std::vector<double>{0.1, 0.4, 0.4, 0.1}, 0.3), NucleusMask{0b0010});
}

TEST(Nucleus, MatchesOracle) {
  Rng rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> z(vocab().size);
    for (auto& x : z) x = (rng.uniform() - 0.5) * 8.0;
    // Some exact ties.
    if (trial % 3 == 0) z[3] = z[7];
    std::vector<double> p(z.size());
    softmax_into(z, 1.0, p);
    const double top_p = 0.05 + 0.94 * rng.uniform();
    ASSERT_EQ(nucleus(p, top_p), oracle::nucleus(p, top_p)) << "trial " << trial;
  }
  std::vector<double> one_hot(vocab().size, 0.0);
  one_hot[9] = 1.0;
  EXPECT_EQ(nucleus(one_hot, 0.95), NucleusMask{1} << 9);
  EXPECT_EQ(full_mask(25), (NucleusMask{1} << 25) - 1);
}

TEST(MaskedLogProb, MatchesOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> z(vocab().size);
    for (auto& x : z) x = (rng.uniform() - 0.5) * 10.0;
    const TokenId tok = static_cast<TokenId>(rng.below(z.size()));
    NucleusMask mask = rng.next() & full_mask(z.size());
    mask |= NucleusMask{1} << tok;
    const double temp = 0.2 + rng.uniform();
    ASSERT_NEAR(masked_log_prob(z, temp, mask, tok),
                static_cast<double>(oracle::masked_log_prob(z, temp, mask, tok)), 1e-10);
  }
}

TEST(GradLogProb, MatchesFiniteDifferences) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_params(rng.next(), 1.0);
    const auto ctx = random_context(rng);
    const TokenId tok = static_cast<TokenId>(rng.below(vocab().size));
    const auto grad = grad_log_prob(p, ctx, tok);
    ASSERT_EQ(grad.size(), p.weights().size());
    const auto lp = [&](const PolicyParams& q) {
      return masked_log_prob(logits(q, ctx), 1.0, full_mask(vocab().size), tok);
    };
    const FeatureSet fs = p.feature_map().features(ctx);
    // Active rows carry the whole gradient; spot-check them plus one inactive row.
    for (std::uint32_t row : fs.active()) {
      for (TokenId v = 0; v < vocab().size; ++v) {
        const std::size_t i = row * vocab().size + v;
        const double w = p.mutable_weights()[i];
        const double h = 1e-5;
        p.mutable_weights()[i] = w + h;
        const double up = lp(p);
        p.mutable_weights()[i] = w - h;
        const double down = lp(p);
        p.mutable_weights()[i] = w;
        ASSERT_NEAR(grad[i], (up - down) / (2 * h), 1e-7);
      }
    }
    double inactive = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      bool active = false;
      for (std::uint32_t row : fs.active()) active |= i / vocab().size == row;
      if (!active) inactive += std::abs(grad[i]);
    }
    EXPECT_EQ(inactive, 0.0);
  }
}

TEST(GradLogProb, FuzzedTriplesAndIdentities) {
  Rng rng(13);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto p = random_params(rng.next(), 1.5);
    const auto ctx = random_context(rng);
    const TokenId tok = static_cast<TokenId>(rng.below(vocab().size));
    const auto grad = grad_log_prob(p, ctx, tok);
    const std::uint32_t row = p.feature_map().features(ctx).active()[rng.below(3)];
    const std::size_t i = row * vocab().size + rng.below(vocab().size);
    const double w = p.mutable_weights()[i], h = 1e-5;
    const auto lp = [&] { return masked_log_prob(logits(p, ctx), 1.0, full_mask(vocab().size), tok); };
    p.mutable_weights()[i] = w + h;
    const double up = lp();
    p.mutable_weights()[i] = w - h;
    const double down = lp();
    p.mutable_weights()[i] = w;
    const double fd = (up - down) / (2 * h);
    ASSERT_LT(std::abs(fd - grad[i]) / std::max(std::abs(fd), 1e-3), 1e-6) << "trial " << trial;
    ++checked;

    // Expected gradient under the policy's own distribution is zero.
    const Distribution d = distribution(p, ctx, 1.0);
    std::vector<double> sum(grad.size(), 0.0);
    for (TokenId v = 0; v < vocab().size; ++v) {
      const auto g = grad_log_prob(p, ctx, v);
      for (std::size_t j = 0; j < g.size(); ++j) sum[j] += d[v] * g[j];
    }
    for (double x : sum) ASSERT_NEAR(x, 0.0, 1e-12);
  }
  EXPECT_EQ(checked, 120);

  // At the uniform distribution every active (feature, token) entry is 1 - 1/|V|.
  const auto zero = PolicyParams::zeros(vocab());
  const auto ctx = toks({"<bos>", "3", "?"});
  const auto g = grad_log_prob(zero, ctx, 6);
  for (std::uint32_t row : zero.feature_map().features(ctx).active()) {
    EXPECT_NEAR(g[row * vocab().size + 6], 1.0 - 1.0 / 25, 1e-15);
    EXPECT_NEAR(g[row * vocab().size + 7], -1.0 / 25, 1e-15);
  }
}

TEST(Sampler, NearZeroTemperatureIsGreedy) {
  const auto p = random_params(14, 2.0);
  SamplerConfig cfg;
  cfg.temperature = 1e-4;
  cfg.top_p = 1.0;
  cfg.max_len = 30;
  auto s = SampleStreams::from_seed(1);
  const Rollout r = sample_response(p, toks({"<bos>", "5", "-", "2", "?"}), cfg, s);
  const auto& seq = r.response.sequence();
  for (std::size_t t = 0; t < r.response.length(); ++t) {
    const std::span<const TokenId> ctx(seq.data(), r.response.prompt_len() + t);
    const auto z = logits(p, ctx);
    ASSERT_EQ(static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin()),
              seq[ctx.size()]);
  }
}

TEST(Sampler, SeededRunsRepeat) {
  const auto p = random_params(7, 1.0);
  const auto prompt = toks({"<bos>", "3", "+", "4", "?"});
  SamplerConfig cfg;
  cfg.max_len = 40;
  auto a = SampleStreams::from_seed(11), b = SampleStreams::from_seed(11),
       c = SampleStreams::from_seed(12);
  const auto ra = sample_response(p, prompt, cfg, a);
  const auto rb = sample_response(p, prompt, cfg, b);
  const auto rc = sample_response(p, prompt, cfg, c);
  EXPECT_EQ(ra.response.sequence(), rb.response.sequence());
  EXPECT_EQ(ra.log_probs, rb.log_probs);
  EXPECT_EQ(ra.entropies, rb.entropies);
  EXPECT_NE(ra.response.sequence(), rc.response.sequence());
}

TEST(Sampler, RecordsMatchRecomputation) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_params(rng.next(), 1.5);
    const Task task = generate_task(2, rng, vocab());
    SamplerConfig cfg;
    cfg.max_len = 30;
    cfg.ratio_on_sampling_dist = trial % 2 == 0;
    cfg.entropy_at_sample_temp = false;
    auto streams = SampleStreams::from_seed(rng.next());
    const Rollout r = sample_response(p, task.prompt_tokens, cfg, streams);
    const auto& seq = r.response.sequence();
    ASSERT_EQ(r.log_probs.size(), r.response.length());
    for (std::size_t t = 0; t < r.response.length(); ++t) {
      const std::span<const TokenId> ctx(seq.data(), r.response.prompt_len() + t);
      const TokenId tok = seq[ctx.size()];
      const double temp = cfg.ratio_on_sampling_dist ? cfg.temperature : 1.0;
      ASSERT_NEAR(r.log_probs[t], ratio_log_prob(p, p.feature_map().features(ctx), r.masks[t], tok, cfg),
                  1e-12);
      ASSERT_NEAR(r.log_probs[t],
                  static_cast<double>(oracle::masked_log_prob(logits(p, ctx), temp, r.masks[t], tok)),
                  1e-10);
      const auto full = oracle::softmax(logits(p, ctx), 1.0);
      ASSERT_NEAR(r.entropies[t], static_cast<double>(oracle::entropy(full)), 1e-10);
      // The sampled token always lies in the nucleus of the sampling distribution.
      const auto ps = oracle::softmax(logits(p, ctx), cfg.temperature);
      std::vector<double> psd(ps.begin(), ps.end());
      ASSERT_TRUE(oracle::nucleus(psd, cfg.top_p) >> tok & 1);
    }
  }
}

TEST(Sampler, TruncatesAtMaxLen) {
  auto p = PolicyParams::zeros(vocab());
  SamplerConfig cfg;
  cfg.max_len = 12;
  cfg.top_p = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = SampleStreams::from_seed(seed);
    const Rollout r = sample_response(p, toks({"<bos>", "2", "?"}), cfg, s);
    EXPECT_LE(r.response.length(), 12u);
    EXPECT_EQ(r.truncated, r.response.generated().back() != vocab().eos);
  }
  cfg.temperature = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Sampler, ReplayedThinkingReproducesAnswer) {
  // The answer stream is untouched while a prefix is replayed, so forcing the
  // sampled thinking phase gives back the sampled answer.
  const auto& p = testing::pretrained();
  const auto tasks = generate_tasks(kTrainDifficulties, 40, 5, vocab());
  SamplerConfig cfg;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto s1 = SampleStreams::from_seed(100 + i);
    const Rollout r = sample_response(p, tasks[i].prompt_tokens, cfg, s1);
    if (!r.response.has_close()) continue;
    const auto gen = r.response.generated();
    const std::vector<TokenId> prefix(gen.begin(), gen.begin() + r.response.close_index());
    auto s2 = SampleStreams::from_seed(100 + i);
    const Rollout again = continue_response(p, tasks[i].prompt_tokens, prefix, cfg, s2);
    ASSERT_EQ(again.response.sequence(), r.response.sequence());
    ASSERT_EQ(again.log_probs, r.log_probs);
  }
}

TEST(Checkpoint, RoundTripsExactly) {
  const auto p = random_params(9, 3.0);
  std::stringstream ss;
  save_checkpoint(p, ss);
  const PolicyParams back = load_checkpoint(ss, vocab());
  EXPECT_EQ(back, p);
  // 8 magic + 3 x u32 + u64 digest, then the weights.
  EXPECT_EQ(ss.str().size(), 8 + 12 + 8 + 8 * p.weights().size());
  EXPECT_EQ(ss.str().substr(0, 8), "PEARCKPT");

  const auto dir = testing::scratch_dir("ckpt");
  save_checkpoint(p, dir / "a.ckpt");
  save_checkpoint(load_checkpoint(dir / "a.ckpt", vocab()), dir / "b.ckpt");
  std::ifstream a(dir / "a.ckpt", std::ios::binary), b(dir / "b.ckpt", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
}

TEST(Checkpoint, RejectsBadInput) {
  const auto p = random_params(10, 1.0);
  std::stringstream ss;
  save_checkpoint(p, ss);
  const std::string bytes = ss.str();

  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(load_checkpoint(truncated, vocab()), ArtifactError);
  std::stringstream trailing(bytes + "x");
  EXPECT_THROW(load_checkpoint(trailing, vocab()), ArtifactError);
  std::stringstream garbage("definitely not a checkpoint");
  EXPECT_THROW(load_checkpoint(garbage, vocab()), ArtifactError);
  std::string flipped = bytes;
  flipped[0] ^= 0x5a;
  std::stringstream bad_magic(flipped);
  EXPECT_THROW(load_checkpoint(bad_magic, vocab()), ArtifactError);
  EXPECT_THROW(load_checkpoint(std::filesystem::path("/nonexistent/x.ckpt"), vocab()), ArtifactError);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

TEST(Snapshot, IndependentOfLaterUpdatesAndStableBytes) {
  auto live = PolicyParams::uniform_init(vocab(), 3);
  const PolicyParams snap = snapshot(live);
  live.at(0, 0) += 1.0;
  EXPECT_NE(snap, live);
  EXPECT_EQ(snapshot(snap), snap);
  std::stringstream ss;
  save_checkpoint(snap, ss);
  // Recorded once; the weights come from the seeded mt19937_64 stream.
  EXPECT_EQ(fnv1a(ss.str()), kGoldenSnapshotHash);
}

TEST(Params, RejectsBadWeights) {
  const FeatureMap map(vocab());
  EXPECT_THROW(PolicyParams(map, std::vector<double>(3, 0.0)), std::invalid_argument);
  std::vector<double> w(map.num_features() * vocab().size, 0.0);
  w[4] = std::nan("");
  EXPECT_THROW(PolicyParams(map, w), std::invalid_argument);
  const PolicyParams a = PolicyParams::uniform_init(vocab(), 3, 0.5);
  for (double x : a.weights()) {
    EXPECT_LE(std::abs(x), 0.5);
  }
  EXPECT_EQ(a, PolicyParams::uniform_init(vocab(), 3, 0.5));
  EXPECT_EQ(snapshot(a), a);
}

}  // namespace
}  // namespace pear
