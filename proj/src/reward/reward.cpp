// SPDX-License-Identifier: Apache-2.0
#include "pear/reward/reward.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "pear/error.hpp"

namespace pear {

void RewardConfig::validate() const {
  if (!(s > 0.0 && s <= 1.0)) throw ConfigError("reward.s must be in (0, 1]");
  if (!(r_fmt >= 0.0 && r_fmt < 1.0)) throw ConfigError("reward.r_fmt must be in [0, 1)");
  if (!std::isfinite(alpha)) throw ConfigError("reward.alpha must be finite");
}

double phase_penalty(const PhaseEntropy& pe, double alpha) {
  return std::max(0.0, pe.h_think - alpha * pe.h_answer);
}

double pear_reward(const Verdict& verdict, const PhaseEntropy& pe,
                   const RewardConfig& cfg) {
  if (!verdict.correct()) return cfg.r_fmt;
  const double r = std::min(1.0, cfg.s - phase_penalty(pe, cfg.alpha));
  return cfg.clamp_floor ? std::max(r, cfg.r_fmt) : r;
}

double binary_reward(const Verdict& verdict) { return verdict.correct() ? 1.0 : 0.0; }

std::string to_json_line(const RewardAudit& a) {
  const nlohmann::json j = {{"verdict", std::string(to_string(a.verdict))},
                            {"h_think", a.h_think},
                            {"h_answer", a.h_answer},
                            {"penalty", a.penalty},
                            {"reward", a.reward}};
  return j.dump();
}

}  // namespace pear
