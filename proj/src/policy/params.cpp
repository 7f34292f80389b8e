// SPDX-License-Identifier: Apache-2.0
#include "pear/policy/params.hpp"

#include <cmath>
#include <stdexcept>

#include "pear/rng.hpp"

namespace pear {

PolicyParams::PolicyParams(FeatureMap map, std::vector<double> weights,
                           std::uint64_t version)
    : map_(std::move(map)), weights_(std::move(weights)), version_(version) {
  if (weights_.size() != map_.num_features() * map_.vocab().size) {
    throw std::invalid_argument("weight count must equal features x vocab");
  }
  if (!all_finite()) throw std::invalid_argument("weights must be finite");
}

PolicyParams PolicyParams::zeros(const Vocab& vocab) {
  FeatureMap map(vocab);
  std::vector<double> w(map.num_features() * vocab.size, 0.0);
  return PolicyParams(std::move(map), std::move(w));
}

PolicyParams PolicyParams::uniform_init(const Vocab& vocab, std::uint64_t seed,
                                        double scale) {
  PolicyParams p = zeros(vocab);
  Rng rng(seed);
  for (double& w : p.weights_) w = scale * (2.0 * rng.uniform() - 1.0);
  return p;
}

bool PolicyParams::all_finite() const {
  for (double w : weights_) {
    if (!std::isfinite(w)) return false;
  }
  return true;
}

}  // namespace pear
