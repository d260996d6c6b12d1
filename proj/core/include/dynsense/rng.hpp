#pragma once

#include <cstdint>

#include "dynsense/exact.hpp"

namespace dynsense {

/// SplitMix64. Fully specified so that seeded runs are reproducible
/// across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform-ish value in [0, n). Plain modulo: the tiny bias is
  /// irrelevant here, determinism is not.
  std::uint64_t below(std::uint64_t n) noexcept {
    return n == 0 ? 0 : next() % n;
  }

  u128 next_u128() noexcept {
    const u128 hi = next();
    return (hi << 64) | next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace dynsense
