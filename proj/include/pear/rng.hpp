// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pear {

// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

// Derives a seed for a sub-stream identified by a path of integers, e.g.
// derive_seed(run_seed, {step, prompt_index}).
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> path);

// Seeded random stream. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the conversions below are done by hand because
// the standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

  // Child stream seeded from this one's next output.
  Rng fork() { return Rng(mix64(engine_())); }

  friend bool operator==(const Rng& a, const Rng& b) {
    return a.engine_ == b.engine_;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pear
