#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace nrc {

/// Counter-based PRNG (Philox4x32-10, Salmon et al. SC'11).
///
/// Streams are split by key derivation rather than by jumping the state:
/// `derive(i)` returns an independent generator keyed by a SplitMix64 hash
/// of (parent key, i). Every Monte Carlo sub-task in this codebase owns a
/// stream derived from (master seed, task index), which keeps results
/// independent of scheduling and worker count.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed) : key_(split_mix(seed ^ kSeedSalt)) {}

  /// Independent child stream; deterministic in (parent key, index).
  Rng derive(std::uint64_t index) const {
    Rng child;
    child.key_ = split_mix(key_ + kGolden * (index + 1));
    child.counter_ = 0;
    child.buffer_pos_ = 4;
    return child;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<std::uint64_t>::max();
  }

  result_type operator()() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, bound) via rejection sampling.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t draw;
    do {
      draw = (*this)();
    } while (draw >= limit);
    return draw % bound;
  }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_cached_normal_) {
      have_cached_normal_ = false;
      return cached_normal_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    cached_normal_ = radius * std::sin(angle);
    have_cached_normal_ = true;
    return radius * std::cos(angle);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Raw Philox4x32-10 block for a given counter/key, exposed for tests
  /// against the published known-answer vectors.
  static std::array<std::uint32_t, 4> philox4x32(
      std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      counter = philox_round(counter, key);
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return counter;
  }

 private:
  static constexpr std::uint64_t kSeedSalt = 0x5CA1AB1E0DDBA11ULL;
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t split_mix(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  static std::array<std::uint32_t, 4> philox_round(
      const std::array<std::uint32_t, 4>& ctr,
      const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t prod0 = 0xD2511F53ULL * ctr[0];
    const std::uint64_t prod1 = 0xCD9E8D57ULL * ctr[2];
    return {static_cast<std::uint32_t>(prod1 >> 32) ^ ctr[1] ^ key[0],
            static_cast<std::uint32_t>(prod1),
            static_cast<std::uint32_t>(prod0 >> 32) ^ ctr[3] ^ key[1],
            static_cast<std::uint32_t>(prod0)};
  }

  std::uint32_t next_u32() {
    if (buffer_pos_ >= 4) {
      const std::array<std::uint32_t, 4> ctr = {
          static_cast<std::uint32_t>(counter_),
          static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u};
      const std::array<std::uint32_t, 2> key = {
          static_cast<std::uint32_t>(key_),
          static_cast<std::uint32_t>(key_ >> 32)};
      buffer_ = philox4x32(ctr, key);
      ++counter_;
      buffer_pos_ = 0;
    }
    return buffer_[buffer_pos_++];
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace nrc
