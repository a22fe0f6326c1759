#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace iab {

/// Deterministic 64-bit random stream (splitmix64). Every stochastic piece of
/// the simulator draws from an explicitly seeded Rng so that identical
/// (config, seed) inputs reproduce identical outputs byte for byte.
/// Substreams for independent entities (links, hours, runs) are derived with
/// Rng::derive, never by sharing a stream across entities.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller. Draws two uniforms per call; the second
  /// product is discarded to keep call sites position-independent.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Derives a child seed from a parent seed and a path of indices, e.g.
  /// derive(seed, {run, hour}) or derive(link_root, {u, v}).
  static std::uint64_t derive(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = seed;
    for (std::uint64_t p : path) {
      h ^= p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      Rng mix(h);
      h = mix.next_u64();
    }
    return h;
  }

 private:
  std::uint64_t state_;
};

}  // namespace iab
