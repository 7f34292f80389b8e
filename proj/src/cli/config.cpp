// SPDX-License-Identifier: Apache-2.0
#include "pear/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "pear/env/env.hpp"
#include "pear/error.hpp"
#include "pear/parallel.hpp"

namespace pear {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("{}: cannot parse '{}'", key, value));
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, value));
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += (i ? "," : "") + fmt::format("{}", xs[i]);
  }
  return out;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Entry {
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define PEAR_NUM(KEY, FIELD, T)                                                  \
  Entry {                                                                       \
    KEY, [](RunConfig& c, const std::string& v) { c.FIELD = parse_number<T>(KEY, v); }, \
        [](const RunConfig& c) { return fmt::format("{}", c.FIELD); }           \
  }
#define PEAR_BOOL(KEY, FIELD)                                                   \
  Entry {                                                                       \
    KEY, [](RunConfig& c, const std::string& v) { c.FIELD = parse_bool(KEY, v); }, \
        [](const RunConfig& c) { return fmt_bool(c.FIELD); }                    \
  }
#define PEAR_STR(KEY, FIELD)                                                    \
  Entry {                                                                       \
    KEY, [](RunConfig& c, const std::string& v) { c.FIELD = v; },               \
        [](const RunConfig& c) { return std::string(c.FIELD); }                 \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      PEAR_NUM("seed", seed, std::uint64_t),
      PEAR_STR("out", out),
      PEAR_NUM("workers", workers, std::size_t),

      PEAR_NUM("sampler.temperature", sampler.temperature, double),
      PEAR_NUM("sampler.top_p", sampler.top_p, double),
      PEAR_NUM("sampler.max_len", sampler.max_len, std::size_t),
      PEAR_BOOL("sampler.entropy_at_sample_temp", sampler.entropy_at_sample_temp),
      PEAR_BOOL("sampler.ratio_on_sampling_dist", sampler.ratio_on_sampling_dist),

      PEAR_NUM("train.group_size", train.group_size, std::size_t),
      PEAR_NUM("train.clip_eps", train.clip_eps, double),
      PEAR_NUM("train.kl_beta", train.kl_beta, double),
      PEAR_NUM("train.learning_rate", train.learning_rate, double),
      PEAR_NUM("train.std_eps", train.std_eps, double),
      PEAR_NUM("train.batch_prompts", train.batch_prompts, std::size_t),
      PEAR_NUM("train.steps", train.steps, std::size_t),
      PEAR_NUM("train.inner_epochs", train.inner_epochs, std::size_t),
      PEAR_NUM("train.momentum", train.momentum, double),

      Entry{"reward.kind",
            [](RunConfig& c, const std::string& v) { c.reward_kind = parse_reward_kind(v); },
            [](const RunConfig& c) { return std::string(to_string(c.reward_kind)); }},
      PEAR_NUM("reward.s", reward.s, double),
      PEAR_NUM("reward.r_fmt", reward.r_fmt, double),
      PEAR_NUM("reward.alpha", reward.alpha, double),
      PEAR_BOOL("reward.clamp_floor", reward.clamp_floor),

      PEAR_NUM("env.verbosity", verbosity, double),
      Entry{"env.train_difficulties",
            [](RunConfig& c, const std::string& v) {
              c.train_difficulties = parse_list<int>("env.train_difficulties", v);
            },
            [](const RunConfig& c) { return join(c.train_difficulties); }},

      PEAR_NUM("pretrain.corpus", pretrain_corpus, std::size_t),
      PEAR_NUM("pretrain.epochs", pretrain.epochs, std::size_t),
      PEAR_NUM("pretrain.learning_rate", pretrain.learning_rate, double),

      PEAR_STR("eval.split", eval_split),
      PEAR_NUM("eval.count", eval_count, std::size_t),
      PEAR_NUM("eval.seed", eval_seed, std::uint64_t),

      PEAR_STR("analyze.experiment", experiment),
      PEAR_NUM("analyze.episodes", analyze_episodes, std::size_t),
      Entry{"analyze.retain_fractions",
            [](RunConfig& c, const std::string& v) {
              c.retain_fractions = parse_list<double>("analyze.retain_fractions", v);
            },
            [](const RunConfig& c) { return join(c.retain_fractions); }},
      Entry{"analyze.baseline_checkpoint",
            [](RunConfig& c, const std::string& v) { c.baseline_checkpoint = v; },
            [](const RunConfig& c) { return c.baseline_checkpoint.string(); }},
      Entry{"analyze.traces", [](RunConfig& c, const std::string& v) { c.traces = v; },
            [](const RunConfig& c) { return c.traces.string(); }},

      Entry{"sweep.alphas",
            [](RunConfig& c, const std::string& v) {
              c.sweep_alphas = parse_list<double>("sweep.alphas", v);
            },
            [](const RunConfig& c) { return join(c.sweep_alphas); }},
      PEAR_BOOL("sweep.include_binary", sweep_include_binary),
  };
  return table;
}

#undef PEAR_NUM
#undef PEAR_BOOL
#undef PEAR_STR

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  for (const Entry& e : entries()) {
    if (key == e.key) {
      e.set(*this, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
  sampler.validate();
  train.validate();
  reward.validate();
  pretrain.validate();
  if (!(verbosity >= 1.0)) throw ConfigError("env.verbosity must be >= 1");
  for (int d : train_difficulties) {
    if (d < kMinDifficulty || d > kMaxDifficulty) {
      throw ConfigError("env.train_difficulties entries must be in [2, 6]");
    }
  }
  if (pretrain_corpus == 0) throw ConfigError("pretrain.corpus must be positive");
  for (double f : retain_fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("analyze.retain_fractions must be in (0, 1]");
  }
  if (out.empty()) throw ConfigError("out must not be empty");
}

std::size_t RunConfig::resolved_workers() const {
  return workers == 0 ? default_workers() : workers;
}

// workers is left out: results do not depend on it, and the saved config
// should be identical across worker counts.
void RunConfig::write(std::ostream& out) const {
  for (const Entry& e : entries()) {
    if (std::string_view(e.key) != "workers") out << e.key << " = " << e.get(*this) << '\n';
  }
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const Entry& e : entries()) out.emplace_back(e.key);
  return out;
}

void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& origin) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}:{}: expected key = value", origin, lineno));
    }
    try {
      cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", origin, lineno, e.what()));
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  apply_config_text(cfg, in, path.string());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must be key=value: " + assignment);
  cfg.set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

}  // namespace pear
