#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gvb {

/// SplitMix64 generator.
///
/// Draw i (1-based) is mix(seed + i * 0x9E3779B97F4A7C15) where mix is the
/// SplitMix64 finalizer. Every derived quantity below is computed in-repo
/// from next_u64(), so an (seed, call sequence) pair yields identical values
/// on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return counter_; }

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform in [lo, hi), via uniform01().
  double uniform(double lo, double hi);

  /// Uniform integer in [lo, hi] (inclusive), unbiased by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// True with probability p: uniform01() < p.
  bool bernoulli(double p);

  /// Independent stream keyed by `tag`; does not advance this generator.
  Rng fork(std::uint64_t tag) const;

  /// Fisher-Yates, iterating from the back, using uniform_int(0, i).
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i - 1)));
      std::swap(items[i - 1], items[j]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

  /// Random permutation of 0..n-1.
  std::vector<int> permutation(int n);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Order-dependent combination of seeds/tags.
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

}  // namespace gvb
