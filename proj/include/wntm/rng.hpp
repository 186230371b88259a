#pragma once

#include <cstdint>
#include <random>

namespace wntm {

/// Seeded generator with a fixed draw discipline. std::mt19937_64's output
/// stream is pinned by the standard; the helpers below avoid
/// std::uniform_*_distribution, whose mapping from raw bits to values is
/// implementation-defined and would break the determinism contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n >= 1.
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wntm
