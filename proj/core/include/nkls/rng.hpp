#pragma once

#include <cstdint>

namespace nkls {

/// Finalizer of the splitmix64 generator (Steele, Lea & Flood; Vigna's
/// reference constants). Bijective on 64-bit words; this is the published
/// mixing function used for all seed derivation in this library.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Child-seed derivation: mix64 applied to the parent seed advanced by
/// (index+1) golden-ratio steps. For a fixed parent, children are pairwise
/// distinct because mix64 is a bijection and the increment is odd.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + 0x9e3779b97f4a7c15ull * (index + 1));
}

/// splitmix64 stream. All randomness in the library flows through this
/// engine so that every result is reproducible bit-for-bit across platforms
/// and standard-library versions (std:: distributions are not portable).
/// Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }

  constexpr result_type operator()() {
    return mix64(state_ += 0x9e3779b97f4a7c15ull);
  }

  /// Uniform double in the open interval (0,1): the top 53 bits of a draw
  /// placed on the 2^-53 grid. 1.0 is unreachable; an exact 0.0 (probability
  /// 2^-53) is rejected and redrawn.
  double uniform_open() {
    for (;;) {
      const double u = static_cast<double>((*this)() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// Unbiased uniform integer in [0, bound), bound >= 1 (Lemire's
  /// multiply-shift rejection).
  std::uint64_t uniform_below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Fair coin: the top bit of one draw.
  bool coin_flip() { return ((*this)() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace nkls
