#pragma once

#include <cstdint>
#include <random>

namespace mptcplab {

/// Deterministic random helper built on std::mt19937_64.
///
/// The engine's bit stream is pinned by the standard; the value mappings
/// below avoid std::uniform_*_distribution, whose outputs differ between
/// standard-library implementations. Every scenario generated from the same
/// seed is therefore identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Uniform integer in [0, n). Modulo bias is irrelevant at the n used here.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mptcplab
