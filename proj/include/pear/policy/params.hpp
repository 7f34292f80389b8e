// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pear/policy/features.hpp"

namespace pear {

// Weights of the featurized softmax policy, stored row-major as
// weights[feature * |V| + token].
class PolicyParams {
 public:
  // Throws std::invalid_argument on a size mismatch or non-finite weight.
  PolicyParams(FeatureMap map, std::vector<double> weights,
               std::uint64_t version = 0);

  static PolicyParams zeros(const Vocab& vocab);
  // i.i.d. uniform in [-scale, scale].
  static PolicyParams uniform_init(const Vocab& vocab, std::uint64_t seed,
                                   double scale = 0.01);

  const FeatureMap& feature_map() const { return map_; }
  const Vocab& vocab() const { return map_.vocab(); }
  std::size_t vocab_size() const { return map_.vocab().size; }
  std::size_t num_features() const { return map_.num_features(); }

  std::span<const double> weights() const { return weights_; }
  std::span<double> mutable_weights() { return weights_; }
  std::span<const double> row(std::size_t feature) const {
    return {weights_.data() + feature * vocab_size(), vocab_size()};
  }
  double& at(std::size_t feature, TokenId token) {
    return weights_[feature * vocab_size() + token];
  }

  std::uint64_t version() const { return version_; }
  void set_version(std::uint64_t v) { version_ = v; }

  bool all_finite() const;

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;

 private:
  FeatureMap map_;
  std::vector<double> weights_;
  std::uint64_t version_ = 0;
};

// Deep copy used to freeze the rollout-time and reference policies.
inline PolicyParams snapshot(const PolicyParams& params) { return params; }

}  // namespace pear
