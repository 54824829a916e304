#pragma once

#include <cstdint>
#include <random>

namespace nehari {

/// Deterministic RNG wrapper. Distributions are implemented on top of the
/// raw 64-bit stream so the values do not depend on the standard library's
/// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return (engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  int index(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  /// Child stream for row k of a sweep; keeps rows independent of ordering.
  static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nehari
