/**
 * @file random.hpp
 * @brief Seeded random number utilities with platform-stable output.
 *
 * All randomness in the library flows through Rng so that every run is
 * reproducible from a single 64-bit seed. std::mt19937_64 has a fully
 * specified output sequence; the uniform conversion below avoids
 * std::uniform_real_distribution, whose output is implementation-defined.
 */

#pragma once

#include <cstdint>
#include <random>

namespace subknap {

/// SplitMix64 mixing step; used to derive independent substream seeds.
inline std::uint64_t splitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic seed for substream `stream` of a master seed.
inline std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return splitMix64(seed ^ splitMix64(stream + 1));
}

/// Seeded generator producing uniform doubles in [0, 1).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, bound). Rejection-free modulo is fine here:
  /// bound is tiny relative to 2^64, bias is far below anything observable.
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

  std::uint64_t raw() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

} // namespace subknap
