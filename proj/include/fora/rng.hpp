#pragma once

#include <cstdint>

namespace fora {

namespace rng_detail {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

}  // namespace rng_detail

/// Counter-based stream: the n-th output is a pure function of (key, n).
class RngStream {
 public:
  constexpr explicit RngStream(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t next_u64() noexcept {
    counter_ += rng_detail::kGamma;
    return rng_detail::mix64(key_ + counter_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) without modulo bias (Lemire's method).
  /// `bound` must be positive.
  std::uint64_t bounded(std::uint64_t bound) noexcept {
    __extension__ using u128 = unsigned __int128;
    u128 product = static_cast<u128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<u128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Seeded source of per-walk streams. The stream for the j-th walk issued
/// from node v depends only on (seed, v, j), so walks can be generated in any
/// order or in parallel and a precomputed index replays online walks exactly.
class WalkRng {
 public:
  constexpr explicit WalkRng(std::uint64_t seed) noexcept : seed_(seed) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }

  constexpr RngStream stream(std::uint64_t node,
                             std::uint64_t walk_index) const noexcept {
    using rng_detail::kGamma;
    using rng_detail::mix64;
    std::uint64_t h = mix64(seed_ + kGamma);
    h = mix64(h ^ (node * 0xd1342543de82ef95ULL + kGamma));
    h = mix64(h ^ (walk_index * 0xaf251af3b0f025b5ULL + 2 * kGamma));
    return RngStream(h);
  }

  /// Stream for auxiliary draws (graph generation, source sampling) that must
  /// not collide with walk streams.
  constexpr RngStream aux_stream(std::uint64_t tag) const noexcept {
    return RngStream(rng_detail::mix64(seed_ ^ 0x5bd1e9955bd1e995ULL) ^
                     rng_detail::mix64(tag + 0x632be59bd9b4e019ULL));
  }

 private:
  std::uint64_t seed_;
};

}  // namespace fora
