#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace crowdpivot {

/// Mixes (seed, key) into a well-spread 64-bit value (splitmix64 finalizer).
/// This is the stream-splitting rule used everywhere seeds are derived from
/// replication/trial indices.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t key) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (key + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream. Variates are produced by explicit arithmetic
/// on the engine's raw 64-bit output, never through std distributions, so a
/// seed reproduces the same sequence on every build of this code.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, key): work split across replications this
  /// way does not depend on evaluation order.
  static Rng substream(std::uint64_t seed, std::uint64_t key) { return Rng(mix64(seed, key)); }
  static Rng substream(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2) {
    return Rng(mix64(mix64(seed, k1), k2));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; consumes exactly two raw draws.
  double normal() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Uniform index in [0, n). Modulo bias is below 1e-15 for any n this
  /// project draws (panel sizes), far under every tolerance in use.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace crowdpivot
