#pragma once

// Portable random streams.
//
// Every draw in the stochastic engine comes from xoshiro256** seeded through
// SplitMix64, and every distribution below is written out explicitly. The
// standard library's distributions are implementation-defined, so using them
// would make a seed produce different runs on libstdc++ and libc++.
//
// Stream layout: one independent stream per (seed, step, phase, index).
// The index is an occupation (origin for separations and application
// routing, destination for urn matching), so per-occupation sampling can run
// in any order or concurrently and still reproduce bit-for-bit.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace labornet {

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix_key(std::uint64_t key, std::uint64_t value) noexcept {
  std::uint64_t s = key ^ (value * 0xD1B54A32D192ED03ULL);
  return splitmix64(s);
}

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [0, n), unbiased (Lemire's multiply-and-reject).
  std::uint64_t uniform_index(std::uint64_t n) noexcept {
    if (n <= 1) return 0;
    std::uint64_t low = 0;
    std::uint64_t high = mul_wide((*this)(), n, low);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) high = mul_wide((*this)(), n, low);
    }
    return high;
  }

  /// Exact Bin(trials, p) by summing geometric waiting times (inversion).
  /// Cost is O(trials * min(p, 1-p) + 1).
  std::int64_t binomial(std::int64_t trials, double p) noexcept {
    if (trials <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    if (p > 0.5) return trials - binomial(trials, 1.0 - p);
    const double log_q = std::log1p(-p);
    const auto limit = static_cast<double>(trials);
    double position = 0.0;
    std::int64_t successes = 0;
    for (;;) {
      const double u = 1.0 - uniform01();  // (0, 1]
      position += std::floor(std::log(u) / log_q) + 1.0;
      if (position > limit) break;
      ++successes;
    }
    return successes;
  }

  /// Index drawn proportionally to a non-decreasing cumulative weight table.
  std::size_t categorical(std::span<const double> cumulative) noexcept {
    const double target = uniform01() * cumulative.back();
    std::size_t lo = 0;
    std::size_t hi = cumulative.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cumulative[mid] > target) hi = mid; else lo = mid + 1;
    }
    return lo;
  }

 private:
  // Full 64x64 -> 128 bit product; returns the high word.
  static std::uint64_t mul_wide(std::uint64_t a, std::uint64_t b, std::uint64_t& low) noexcept {
    const std::uint64_t a0 = a & 0xFFFFFFFFULL, a1 = a >> 32;
    const std::uint64_t b0 = b & 0xFFFFFFFFULL, b1 = b >> 32;
    const std::uint64_t p00 = a0 * b0, p01 = a0 * b1, p10 = a1 * b0, p11 = a1 * b1;
    const std::uint64_t mid = (p00 >> 32) + (p01 & 0xFFFFFFFFULL) + (p10 & 0xFFFFFFFFULL);
    low = (mid << 32) | (p00 & 0xFFFFFFFFULL);
    return p11 + (p01 >> 32) + (p10 >> 32) + (mid >> 32);
  }

  std::uint64_t s_[4];
};

enum class StreamPhase : std::uint64_t {
  Separation = 1,
  Routing = 2,
  Matching = 3,
  Shuffle = 4,
};

class RandomStreams {
 public:
  explicit RandomStreams(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  Xoshiro256 stream(std::uint64_t step, StreamPhase phase,
                    std::uint64_t index) const noexcept {
    std::uint64_t key = mix_key(seed_, step);
    key = mix_key(key, static_cast<std::uint64_t>(phase));
    key = mix_key(key, index);
    return Xoshiro256(key);
  }

 private:
  std::uint64_t seed_;
};

/// Seed of the r-th replica of an ensemble rooted at `seed`.
constexpr std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) noexcept {
  return mix_key(mix_key(seed, 0xE45E3B1EULL), replica);
}

}  // namespace labornet
