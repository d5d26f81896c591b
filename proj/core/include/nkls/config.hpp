#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nkls/errors.hpp"
#include "nkls/rng.hpp"

namespace nkls {

/// An N-bit decision string; bits[i] is the state (0 or 1) of node i.
/// Two configurations are neighbors iff they differ in exactly one bit.
struct Configuration {
  std::vector<std::uint8_t> bits;

  Configuration() = default;
  explicit Configuration(std::vector<std::uint8_t> b) : bits(std::move(b)) {
    for (auto v : bits) {
      if (v > 1) throw ParameterDomainError("configuration bits must be 0 or 1");
    }
  }

  int n() const { return static_cast<int>(bits.size()); }

  /// Unsigned encoding with node 0 in bit 0. Requires n <= 64.
  std::uint64_t packed() const {
    std::uint64_t v = 0;
    for (int i = 0; i < n(); ++i) v |= static_cast<std::uint64_t>(bits[i]) << i;
    return v;
  }

  static Configuration from_packed(std::uint64_t value, int n) {
    Configuration c;
    c.bits.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c.bits[i] = static_cast<std::uint8_t>((value >> i) & 1u);
    return c;
  }

  /// Node 0 first, e.g. "10" for bits {1,0}.
  std::string to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
  }

  bool operator==(const Configuration&) const = default;
};

inline Configuration with_flipped(Configuration c, int node) {
  c.bits.at(static_cast<std::size_t>(node)) ^= 1u;
  return c;
}

/// Each bit independently 0 or 1 with probability one half (one stream draw
/// per bit, top bit used).
inline Configuration random_config(int n, SplitMix64& rng) {
  if (n < 1) throw ParameterDomainError("random_config: n must be >= 1");
  Configuration c;
  c.bits.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) c.bits[i] = rng.coin_flip() ? 1 : 0;
  return c;
}

}  // namespace nkls
