// zq.hpp - exact linear algebra over Z_q plus the gadget / decomposition maps.
//
// Conventions: matrices are row-major with entries canonicalized to [0, q);
// signed integer vectors/matrices carry lattice elements (keys, noise) and are
// lifted mod q at the point of use.  Bit decompositions are coordinate-major,
// least-significant digit first, matching gadget_matrix's block layout, so
// bd(x)^t * p2(y) == x^t y and G * bd(v) == v hold exactly.

#pragma once

#include <cstdint>
#include <vector>

namespace ibpre {

struct ZqVector {
  std::uint64_t q = 0;
  std::vector<std::uint64_t> v;

  ZqVector() = default;
  ZqVector(std::uint64_t q_in, std::size_t n) : q(q_in), v(n, 0) {}
  std::size_t size() const { return v.size(); }
  std::uint64_t& operator[](std::size_t i) { return v[i]; }
  std::uint64_t operator[](std::size_t i) const { return v[i]; }
  bool operator==(const ZqVector&) const = default;
};

struct ZqMatrix {
  std::uint64_t q = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> a;

  ZqMatrix() = default;
  ZqMatrix(std::uint64_t q_in, std::size_t r, std::size_t c)
      : q(q_in), rows(r), cols(c), a(r * c, 0) {}
  std::uint64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  std::uint64_t at(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }
  const std::uint64_t* row(std::size_t i) const { return a.data() + i * cols; }
  std::uint64_t* row(std::size_t i) { return a.data() + i * cols; }
  bool operator==(const ZqMatrix&) const = default;
};

struct IntVector {
  std::vector<std::int64_t> v;

  IntVector() = default;
  explicit IntVector(std::size_t n) : v(n, 0) {}
  std::size_t size() const { return v.size(); }
  std::int64_t& operator[](std::size_t i) { return v[i]; }
  std::int64_t operator[](std::size_t i) const { return v[i]; }
  bool operator==(const IntVector&) const = default;
};

struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> a;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  std::int64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  std::int64_t at(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }
  const std::int64_t* row(std::size_t i) const { return a.data() + i * cols; }
  std::int64_t* row(std::size_t i) { return a.data() + i * cols; }
  bool operator==(const IntMatrix&) const = default;
};

// ---- scalar helpers -------------------------------------------------------

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b,
                             std::uint64_t q) {
  std::uint64_t s = a + b;
  if (s >= q || s < a) s -= q;
  return s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b,
                             std::uint64_t q) {
  return a >= b ? a - b : a + (q - b);
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b,
                             std::uint64_t q) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % q);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t q);
// Multiplicative inverse mod q; throws if gcd(a, q) != 1.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t q);

// Canonical representative of a signed value.
inline std::uint64_t lift_mod(std::int64_t x, std::uint64_t q) {
  std::int64_t r = x % static_cast<std::int64_t>(q);
  if (r < 0) r += static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(r);
}

// Signed representative in [-q/2, q/2).
inline std::int64_t center_mod(std::uint64_t x, std::uint64_t q) {
  return x >= (q + 1) / 2 ? static_cast<std::int64_t>(x) -
                                static_cast<std::int64_t>(q)
                          : static_cast<std::int64_t>(x);
}

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);
std::uint64_t next_prime(std::uint64_t n);  // smallest prime >= n

// ---- vector / matrix arithmetic -------------------------------------------

ZqVector add(const ZqVector& a, const ZqVector& b);
ZqVector sub(const ZqVector& a, const ZqVector& b);
std::uint64_t dot(const ZqVector& a, const ZqVector& b);

// c = A * B over Z_q (dims checked).
ZqMatrix mat_mul(const ZqMatrix& a, const ZqMatrix& b);
// y = A * x.
ZqVector mat_vec(const ZqMatrix& a, const ZqVector& x);
// y = A^t * x (x has a.rows entries).
ZqVector mat_tvec(const ZqMatrix& a, const ZqVector& x);
// y = A * x for a signed x (lifted mod q).
ZqVector mat_vec_int(const ZqMatrix& a, const IntVector& x);
// C = A * R for signed R (lifted mod q).
ZqMatrix mat_mul_int(const ZqMatrix& a, const IntMatrix& r);
// y^t = x^t * R for x over Z_q and signed R (result over Z_q, length r.cols).
ZqVector tvec_int(const IntMatrix& r, const ZqVector& x);
// C = R * A for signed R (lifted mod q).
ZqMatrix mat_int_mul(const IntMatrix& r, const ZqMatrix& a);
// y = R * x for signed R (result over Z_q, length r.rows).
ZqVector mat_int_vec(const IntMatrix& r, const ZqVector& x);
// x^t y over Z_q for signed x.
std::uint64_t dot_int(const IntVector& x, const ZqVector& y);

ZqMatrix transpose(const ZqMatrix& a);
ZqVector lift_vec(const IntVector& x, std::uint64_t q);
IntVector center_vec(const ZqVector& x);

// Gaussian elimination mod prime q.
std::uint64_t det_mod(const ZqMatrix& a);
// Inverse mod prime q; throws std::domain_error when singular.
ZqMatrix inv_matrix(const ZqMatrix& a);

// ---- decomposition / gadget -----------------------------------------------

// Coordinate-major binary digits (LSB first), k digits per coordinate.
IntVector bd(const ZqVector& x, unsigned k);
// Coordinate-major powers-of-two expansion: block i is (y_i, 2y_i, ..., 2^(k-1) y_i).
ZqVector p2(const ZqVector& y, unsigned k);
// p2 of a signed vector, lifted mod q first.
ZqVector p2_int(const IntVector& y, unsigned k, std::uint64_t q);

// G = I_n (x) (1, 2, 4, ..., 2^(k-1)) as an n x nk matrix over Z_q.
ZqMatrix gadget_matrix(std::size_t n, unsigned k, std::uint64_t q);
// y = G * z without materializing G; z has n*k signed entries.
ZqVector gadget_mul(const IntVector& z, std::size_t n, unsigned k,
                    std::uint64_t q);

double norm(const IntVector& x);

}  // namespace ibpre
