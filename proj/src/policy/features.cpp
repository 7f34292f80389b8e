// SPDX-License-Identifier: Apache-2.0
#include "pear/policy/features.hpp"

#include <stdexcept>

namespace pear {

FeatureMap::FeatureMap(const Vocab& vocab) : vocab_(vocab) { vocab_.validate(); }

std::size_t FeatureMap::bucket(std::size_t position_in_phase) {
  if (position_in_phase < 4) return 0;
  if (position_in_phase < 8) return 1;
  if (position_in_phase < 16) return 2;
  return 3;
}

FeatureSet FeatureMap::from_tracker(const ScratchpadTracker& tracker) const {
  FeatureSet fs;
  if (const auto last = tracker.last()) fs.add(last_row(*last));
  if (const auto second = tracker.second_last()) fs.add(second_last_row(*second));
  fs.add(phase_row(tracker.phase()));
  fs.add(bucket_row(bucket(tracker.position_in_phase())));
  fs.add(cue_row(tracker.expected_next()));
  return fs;
}

FeatureSet FeatureMap::features(std::span<const TokenId> context) const {
  if (context.empty()) throw std::invalid_argument("empty context");
  ScratchpadTracker tracker(vocab_);
  for (TokenId t : context) {
    if (!vocab_.contains(t)) throw std::invalid_argument("unknown token id");
    tracker.push(t);
  }
  return from_tracker(tracker);
}

std::string FeatureMap::describe() const {
  return "pear-features/v1;V=" + std::to_string(vocab_.size) +
         ";last;second_last;phase3;bucket(0-3,4-7,8-15,16+);cue+none";
}

std::uint64_t FeatureMap::digest() const {
  // FNV-1a over the layout description.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : describe()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace pear
