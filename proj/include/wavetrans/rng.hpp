#pragma once

#include <cstdint>

namespace wavetrans {

/// Deterministic, splittable counter-based generator (splitmix64 core).
/// Substreams keyed by (seed, stream ids) are independent of scheduling,
/// so parallel generation reproduces bit-identically.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL) {}

  static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    Rng base(seed);
    base.state_ ^= mix(a + 0x8000000000000001ULL);
    base.state_ ^= mix(b + 0x5851F42D4C957F2DULL) << 1;
    base.next_u64();
    return base;
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform in (0, 1); never returns 0 so logs are safe.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (portable across standard libraries).
  double next_gaussian();

private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace wavetrans
