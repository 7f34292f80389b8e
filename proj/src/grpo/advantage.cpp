// SPDX-License-Identifier: Apache-2.0
#include "pear/grpo/advantage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pear {

std::vector<double> normalize_advantages(std::span<const double> rewards,
                                         double std_eps) {
  const std::size_t g = rewards.size();
  if (g < 2) throw std::invalid_argument("advantage normalization needs G >= 2");
  std::vector<double> adv(g, 0.0);
  const auto [lo, hi] = std::minmax_element(rewards.begin(), rewards.end());
  if (*lo == *hi) return adv;

  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(g);
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / static_cast<double>(g));
  for (std::size_t i = 0; i < g; ++i) adv[i] = (rewards[i] - mean) / (sd + std_eps);
  return adv;
}

}  // namespace pear
