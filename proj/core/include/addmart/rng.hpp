#pragma once

#include <cmath>
#include <cstdint>

namespace addmart {

/// Finalizer from SplitMix64; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based stream split: hashes (master seed, path index, stream id)
/// into an independent substream seed. Every path/atom owns its own stream,
/// so simulation results do not depend on worker scheduling.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t path_index,
                                           std::uint64_t stream_id) {
  std::uint64_t h = mix64(master_seed + 0x9E3779B97F4A7C15ull);
  h = mix64(h ^ (path_index + 0x9E3779B97F4A7C15ull));
  h = mix64(h ^ (stream_id + 0xD1B54A32D192ED03ull));
  return h;
}

/// xoshiro256++ with self-contained normal/exponential samplers. The
/// samplers avoid std::*_distribution on purpose: their output is then
/// bit-identical for a given seed across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9E3779B97F4A7C15ull;
      word = mix64(sm);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open01() {
    double u;
    do {
      u = uniform01();
    } while (u <= 0.0);
    return u;
  }

  /// Standard normal via the Box-Muller pair; second value cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  /// Exponential(1); strictly positive.
  double exponential() { return -std::log(uniform_open01()); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace addmart
