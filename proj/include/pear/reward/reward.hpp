// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "pear/core/entropy.hpp"
#include "pear/env/env.hpp"

namespace pear {

struct RewardConfig {
  double s = 1.0;      // base score for a correct answer, in (0, 1]
  double r_fmt = 0.0;  // score for wrong or unparseable answers, in [0, 1)
  double alpha = 1.0;
  // Floor the correct-branch reward at r_fmt. Off by default: the correct
  // branch is otherwise unbounded below.
  bool clamp_floor = false;

  // Throws ConfigError.
  void validate() const;
};

// max(0, h_think - alpha * h_answer).
double phase_penalty(const PhaseEntropy& pe, double alpha);

double pear_reward(const Verdict& verdict, const PhaseEntropy& pe,
                   const RewardConfig& cfg);

double binary_reward(const Verdict& verdict);

struct RewardAudit {
  VerdictKind verdict = VerdictKind::kMalformed;
  double h_think = 0.0;
  double h_answer = 0.0;
  double penalty = 0.0;
  double reward = 0.0;
};

// {"verdict": "...", "h_think": x, "h_answer": x, "penalty": x, "reward": x}
std::string to_json_line(const RewardAudit& audit);

}  // namespace pear
