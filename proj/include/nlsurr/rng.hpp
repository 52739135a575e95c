#pragma once

#include <cstdint>
#include <random>

namespace nlsurr {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed-splitting rule: stream `index` of `seed` is mix64(mix64(seed) ^ mix64(index + 1)).
/// Used both for pipeline stages (index = stage number) and for per-realization
/// streams (index = realization number), so one integer reproduces a whole run.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + 1));
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform double in [0, 1) taken from the top 53 bits; independent of the
/// standard library's distribution implementation.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal by Box-Muller (one value per call, second one discarded).
double standard_normal(Rng& rng);

/// Uniform integer in [0, n) by rejection.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

}  // namespace nlsurr
