// rng.hpp - deterministic counter-based CSPRNG (ChaCha20 keystream).
//
// Every random draw in the library flows through Rng so that a (seed, counter)
// pair pins the entire output stream bit-for-bit.  The counter advances once
// per 64-byte keystream block; callers never observe partial-block state.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace ibpre {

using Seed = std::array<std::uint8_t, 32>;

class Rng {
 public:
  explicit Rng(const Seed& seed, std::uint64_t counter = 0);

  // Stream-derivation rule used by the trial harness: XOR `index` into the
  // first eight seed bytes (little-endian) and reset the counter.  Disjoint
  // indices give independent streams under the PRF assumption.
  Rng derive(std::uint64_t index) const;

  std::uint64_t next_u64();
  // Uniform in [0, 2^bits), bits in [1, 64].
  std::uint64_t next_bits(unsigned bits);
  // Uniform in [0, bound) by masked rejection; bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);
  // Uniform double in [0, 1) with 53 bits of precision.
  double next_unit();
  // Standard normal via Box-Muller (used only for perturbation shaping;
  // all integer outputs go through the discrete samplers).
  double next_normal();

  void fill_bytes(std::uint8_t* out, std::size_t len);

  const Seed& seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  void refill();

  Seed seed_;
  std::uint64_t counter_;
  std::array<std::uint8_t, 64> block_;
  std::size_t pos_;
  bool have_spare_normal_;
  double spare_normal_;
};

// Parses a 64-hex-digit seed string; throws std::invalid_argument otherwise.
Seed parse_seed_hex(const std::string& hex);
std::string seed_to_hex(const Seed& seed);
// Fresh seed from the OS entropy pool (CLI default when no --seed is given).
Seed random_seed();

}  // namespace ibpre
