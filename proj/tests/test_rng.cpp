// Deterministic RNG tests: keystream identity against the published
// zero-key ChaCha20 block, stream independence under derive(), and the
// draw helpers' range/distribution contracts.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "ibpre/rng.hpp"

using namespace ibpre;

namespace {

Seed test_seed(std::uint8_t fill = 0) {
  Seed s{};
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = static_cast<std::uint8_t>(fill + i);
  return s;
}

}  // namespace

TEST_CASE("zero key and zero counter reproduce the reference keystream") {
  // First 16 bytes of the ChaCha20 keystream for all-zero key, nonce and
  // counter (the standard published test vector).
  const std::uint8_t expect[16] = {0x76, 0xb8, 0xe0, 0xad, 0xa0, 0xf1,
                                   0x3d, 0x90, 0x40, 0x5d, 0x6a, 0xe5,
                                   0x53, 0x86, 0xbd, 0x28};
  Rng rng(Seed{});
  std::uint8_t got[16] = {};
  rng.fill_bytes(got, sizeof(got));
  for (int i = 0; i < 16; ++i) CHECK(got[i] == expect[i]);
}

TEST_CASE("identical seeds give identical streams") {
  Rng a(test_seed(3));
  Rng b(test_seed(3));
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("starting counter skips whole 64-byte blocks") {
  Rng base(test_seed(9), 0);
  for (int i = 0; i < 8; ++i) base.next_u64();  // consume block 0
  Rng ahead(test_seed(9), 1);
  for (int i = 0; i < 24; ++i) CHECK(base.next_u64() == ahead.next_u64());
}

TEST_CASE("derive XORs the index into the first eight seed bytes") {
  Seed s = test_seed(7);
  Rng rng(s, 123);
  const std::uint64_t index = 0x0807060504030201ull;
  Rng child = rng.derive(index);
  CHECK(child.counter() == 0);
  for (int i = 0; i < 8; ++i) {
    CHECK(child.seed()[i] ==
          static_cast<std::uint8_t>(s[i] ^ (index >> (8 * i))));
  }
  for (std::size_t i = 8; i < s.size(); ++i) CHECK(child.seed()[i] == s[i]);
}

TEST_CASE("derived streams differ from each other and from the parent") {
  Rng rng(test_seed(1));
  Rng d0 = rng.derive(0);
  Rng d1 = rng.derive(1);
  Rng dmax = rng.derive(~0ull);
  std::vector<std::uint64_t> s0, s1, smax;
  for (int i = 0; i < 8; ++i) {
    s0.push_back(d0.next_u64());
    s1.push_back(d1.next_u64());
    smax.push_back(dmax.next_u64());
  }
  CHECK(s0 != s1);
  CHECK(s0 != smax);
  CHECK(s1 != smax);
  // derive(0) keeps the seed, so it restarts the parent stream at counter 0.
  Rng again(test_seed(1));
  for (int i = 0; i < 8; ++i) CHECK(s0[i] == again.next_u64());
}

TEST_CASE("next_bits stays within range and uses the advertised width") {
  Rng rng(test_seed(5));
  for (int i = 0; i < 200; ++i) CHECK(rng.next_bits(1) <= 1);
  for (int i = 0; i < 200; ++i) CHECK(rng.next_bits(7) < 128);
  // 64-bit draws must be able to exceed 2^63 (sign handling).
  bool saw_high = false;
  for (int i = 0; i < 64 && !saw_high; ++i)
    saw_high = rng.next_bits(64) >> 63 != 0;
  CHECK(saw_high);
}

TEST_CASE("uniform_below respects the bound and covers the range") {
  Rng rng(test_seed(6));
  CHECK_THROWS_AS(rng.uniform_below(0), std::invalid_argument);
  for (int i = 0; i < 100; ++i) CHECK(rng.uniform_below(1) == 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t v = rng.uniform_below(10);
    CHECK(v < 10);
    seen.insert(v);
  }
  CHECK(seen.size() == 10);
  // Non-power-of-two bound near 2^63: rejection must terminate and stay
  // below the bound.
  const std::uint64_t big = (1ull << 63) + 12345;
  for (int i = 0; i < 50; ++i) CHECK(rng.uniform_below(big) < big);
}

TEST_CASE("next_unit lies in [0, 1)") {
  Rng rng(test_seed(8));
  for (int i = 0; i < 1000; ++i) {
    double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("next_normal has approximately standard moments") {
  Rng rng(test_seed(4));
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = rng.next_normal();
    sum += x;
    sum_sq += x * x;
  }
  double mean = sum / n;
  double var = sum_sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.02);        // ~6 standard errors
  CHECK(std::fabs(var - 1.0) < 0.03);
}

TEST_CASE("seed hex parsing round-trips and rejects malformed input") {
  Seed s = test_seed(11);
  CHECK(parse_seed_hex(seed_to_hex(s)) == s);
  // Upper-case digits are accepted.
  std::string upper = seed_to_hex(s);
  for (char& c : upper) c = static_cast<char>(std::toupper(c));
  CHECK(parse_seed_hex(upper) == s);
  CHECK_THROWS_AS(parse_seed_hex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_seed_hex(std::string(63, '0')), std::invalid_argument);
  CHECK_THROWS_AS(parse_seed_hex(std::string(65, '0')), std::invalid_argument);
  std::string bad(64, '0');
  bad[17] = 'g';
  CHECK_THROWS_AS(parse_seed_hex(bad), std::invalid_argument);
}

TEST_CASE("random_seed draws distinct seeds") {
  CHECK(random_seed() != random_seed());
}

TEST_CASE("fill_bytes is deterministic and length-exact") {
  Rng a(test_seed(2));
  Rng b(test_seed(2));
  std::vector<std::uint8_t> ba(150, 0xAA), bb(150, 0x55);
  a.fill_bytes(ba.data(), 100);
  b.fill_bytes(bb.data(), 100);
  for (int i = 0; i < 100; ++i) CHECK(ba[i] == bb[i]);
  for (int i = 100; i < 150; ++i) {
    CHECK(ba[i] == 0xAA);
    CHECK(bb[i] == 0x55);
  }
}
