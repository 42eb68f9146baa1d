// rng.cpp - ChaCha20 block function and the Rng draw helpers.

#include "ibpre/rng.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>

namespace ibpre {

namespace {

inline std::uint32_t rotl32(std::uint32_t x, int n) {
  return (x << n) | (x >> (32 - n));
}

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c,
                          std::uint32_t& d) {
  a += b; d ^= a; d = rotl32(d, 16);
  c += d; b ^= c; b = rotl32(b, 12);
  a += b; d ^= a; d = rotl32(d, 8);
  c += d; b ^= c; b = rotl32(b, 7);
}

inline std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

// One ChaCha20 block: key = seed, 64-bit block counter, zero nonce.
void chacha20_block(const Seed& key, std::uint64_t counter,
                    std::array<std::uint8_t, 64>& out) {
  std::uint32_t state[16];
  state[0] = 0x61707865u;
  state[1] = 0x3320646eu;
  state[2] = 0x79622d32u;
  state[3] = 0x6b206574u;
  for (int i = 0; i < 8; ++i) state[4 + i] = load_le32(key.data() + 4 * i);
  state[12] = static_cast<std::uint32_t>(counter);
  state[13] = static_cast<std::uint32_t>(counter >> 32);
  state[14] = 0;
  state[15] = 0;

  std::uint32_t x[16];
  std::memcpy(x, state, sizeof(x));
  for (int round = 0; round < 10; ++round) {
    quarter_round(x[0], x[4], x[8], x[12]);
    quarter_round(x[1], x[5], x[9], x[13]);
    quarter_round(x[2], x[6], x[10], x[14]);
    quarter_round(x[3], x[7], x[11], x[15]);
    quarter_round(x[0], x[5], x[10], x[15]);
    quarter_round(x[1], x[6], x[11], x[12]);
    quarter_round(x[2], x[7], x[8], x[13]);
    quarter_round(x[3], x[4], x[9], x[14]);
  }
  for (int i = 0; i < 16; ++i) {
    std::uint32_t word = x[i] + state[i];
    out[4 * i + 0] = static_cast<std::uint8_t>(word);
    out[4 * i + 1] = static_cast<std::uint8_t>(word >> 8);
    out[4 * i + 2] = static_cast<std::uint8_t>(word >> 16);
    out[4 * i + 3] = static_cast<std::uint8_t>(word >> 24);
  }
}

}  // namespace

Rng::Rng(const Seed& seed, std::uint64_t counter)
    : seed_(seed),
      counter_(counter),
      pos_(64),
      have_spare_normal_(false),
      spare_normal_(0.0) {}

Rng Rng::derive(std::uint64_t index) const {
  Seed derived = seed_;
  for (int i = 0; i < 8; ++i) {
    derived[i] ^= static_cast<std::uint8_t>(index >> (8 * i));
  }
  return Rng(derived, 0);
}

void Rng::refill() {
  chacha20_block(seed_, counter_, block_);
  ++counter_;
  pos_ = 0;
}

std::uint64_t Rng::next_u64() {
  if (pos_ + 8 > 64) refill();
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(block_[pos_ + i]) << (8 * i);
  }
  pos_ += 8;
  return v;
}

std::uint64_t Rng::next_bits(unsigned bits) {
  if (bits >= 64) return next_u64();
  return next_u64() >> (64 - bits);
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: zero bound");
  if (bound == 1) return 0;
  unsigned bits = 64 - static_cast<unsigned>(__builtin_clzll(bound - 1));
  for (;;) {
    std::uint64_t v = next_bits(bits);
    if (v < bound) return v;
  }
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_normal() {
  if (have_spare_normal_) {
    have_spare_normal_ = false;
    return spare_normal_;
  }
  // Box-Muller; u clamped away from 0 so log stays finite.
  double u = next_unit();
  if (u < 0x1.0p-60) u = 0x1.0p-60;
  double v = next_unit();
  double mag = std::sqrt(-2.0 * std::log(u));
  double ang = 2.0 * M_PI * v;
  spare_normal_ = mag * std::sin(ang);
  have_spare_normal_ = true;
  return mag * std::cos(ang);
}

void Rng::fill_bytes(std::uint8_t* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    if (pos_ >= 64) refill();
    out[i] = block_[pos_++];
  }
}

Seed parse_seed_hex(const std::string& hex) {
  if (hex.size() != 64) {
    throw std::invalid_argument("seed must be 64 hex digits");
  }
  Seed seed{};
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("seed contains a non-hex character");
  };
  for (std::size_t i = 0; i < 32; ++i) {
    seed[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) |
                                        nibble(hex[2 * i + 1]));
  }
  return seed;
}

std::string seed_to_hex(const Seed& seed) {
  static const char* digits = "0123456789abcdef";
  std::string out(64, '0');
  for (std::size_t i = 0; i < 32; ++i) {
    out[2 * i] = digits[seed[i] >> 4];
    out[2 * i + 1] = digits[seed[i] & 0xf];
  }
  return out;
}

Seed random_seed() {
  std::random_device rd;
  Seed seed{};
  for (std::size_t i = 0; i < 32; i += 4) {
    std::uint32_t w = rd();
    seed[i] = static_cast<std::uint8_t>(w);
    seed[i + 1] = static_cast<std::uint8_t>(w >> 8);
    seed[i + 2] = static_cast<std::uint8_t>(w >> 16);
    seed[i + 3] = static_cast<std::uint8_t>(w >> 24);
  }
  return seed;
}

}  // namespace ibpre
