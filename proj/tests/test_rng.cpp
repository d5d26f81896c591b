#include <doctest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "nkls/config.hpp"
#include "nkls/rng.hpp"

using namespace nkls;

TEST_SUITE_BEGIN("rng");

TEST_CASE("splitmix64 matches the published reference sequence") {
  // First three outputs for seed 1234567 from the reference implementation.
  SplitMix64 rng(1234567);
  CHECK(rng() == 6457827717110365317ull);
  CHECK(rng() == 3203168211198807973ull);
  CHECK(rng() == 9817491932198370423ull);
}

TEST_CASE("identical seeds give identical streams") {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
}

TEST_CASE("uniform_open stays strictly inside (0,1)") {
  SplitMix64 rng(7);
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.uniform_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_below covers the range without gross bias") {
  SplitMix64 rng(99);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) ++counts[rng.uniform_below(7)];
  for (int c : counts) {
    // 10000 expected; 5 sigma is about +-500
    CHECK(c > 9400);
    CHECK(c < 10600);
  }
}

TEST_CASE("derive_seed children are pairwise distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 10000; ++r) seen.insert(derive_seed(42, r));
  CHECK(seen.size() == 10000);
}

TEST_CASE("derive_seed differs across parents and indices") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(0, 0) != mix64(0));
}

TEST_CASE("random_config determinism and bit balance") {
  SplitMix64 a(5), b(5);
  CHECK(random_config(16, a) == random_config(16, b));

  // Per-bit frequency of ones over 10,000 draws at n=16: binomial
  // concentration puts the mean within [0.47, 0.53] far beyond 3 sigma.
  SplitMix64 rng(123);
  const int draws = 10000;
  std::vector<int> ones(16, 0);
  for (int d = 0; d < draws; ++d) {
    const Configuration c = random_config(16, rng);
    for (int i = 0; i < 16; ++i) ones[i] += c.bits[i];
  }
  for (int i = 0; i < 16; ++i) {
    const double mean = static_cast<double>(ones[i]) / draws;
    CHECK(mean > 0.47);
    CHECK(mean < 0.53);
  }
}

TEST_CASE("random_config rejects n < 1") {
  SplitMix64 rng(1);
  CHECK_THROWS_AS(random_config(0, rng), ParameterDomainError);
}

TEST_CASE("configuration packing round-trips with node 0 in bit 0") {
  const Configuration c = Configuration::from_packed(0b101, 3);
  CHECK(c.bits == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(c.packed() == 5);
  CHECK(c.to_string() == "101");
  CHECK_THROWS_AS(Configuration({0, 2}), ParameterDomainError);
}

TEST_SUITE_END();
