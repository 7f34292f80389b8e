// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace pear {

// (r_i - mean) / (std + std_eps) with the population standard deviation.
// A group whose rewards are all equal gets exactly zero advantages. Throws
// std::invalid_argument for fewer than two rewards.
std::vector<double> normalize_advantages(std::span<const double> rewards,
                                         double std_eps);

}  // namespace pear
