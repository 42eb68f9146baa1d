// frd.hpp - full-rank-difference identity encoding over Z_q[x]/(f).
//
// Identities are coefficient vectors of polynomials g in the quotient field
// Z_q[x]/(f) with f monic irreducible of degree n.  frd_encode(id) is the
// matrix of multiplication by g in the power basis (column j holds the
// coefficients of g * x^j mod f), so the map is additive and every nonzero
// encoding, hence every difference of distinct encodings, is invertible.
//
// Polynomials are coefficient vectors, lowest degree first, entries in [0, q).

#pragma once

#include <cstdint>
#include <vector>

#include "ibpre/zq.hpp"

namespace ibpre {

namespace poly {

// Strips trailing zero coefficients; the zero polynomial becomes {}.
std::vector<std::uint64_t> trim(std::vector<std::uint64_t> a);

// Remainder of a modulo the monic polynomial f.
std::vector<std::uint64_t> rem(std::vector<std::uint64_t> a,
                               const std::vector<std::uint64_t>& f,
                               std::uint64_t q);

// a * b mod f.
std::vector<std::uint64_t> mul_mod(const std::vector<std::uint64_t>& a,
                                   const std::vector<std::uint64_t>& b,
                                   const std::vector<std::uint64_t>& f,
                                   std::uint64_t q);

// a^e mod f for a 64-bit exponent.
std::vector<std::uint64_t> pow_mod(std::vector<std::uint64_t> a,
                                   std::uint64_t e,
                                   const std::vector<std::uint64_t>& f,
                                   std::uint64_t q);

// Monic gcd of a and b over Z_q (q prime); the zero polynomial is {}.
std::vector<std::uint64_t> gcd(std::vector<std::uint64_t> a,
                               std::vector<std::uint64_t> b, std::uint64_t q);

}  // namespace poly

// Rabin irreducibility test for a monic polynomial over Z_q, q prime.
bool poly_is_irreducible(const std::vector<std::uint64_t>& f, std::uint64_t q);

// Smallest c >= 1 with x^n + x + c irreducible mod q, returned as the full
// coefficient list (length n + 1).  Throws if no such c exists below q.
std::vector<std::uint64_t> find_frd_poly(std::size_t n, std::uint64_t q);

// Multiplication-by-g matrix for the identity's polynomial g, where
// frd_poly is the modulus f as produced by find_frd_poly.  Satisfies
// frd_encode(a + b) = frd_encode(a) + frd_encode(b) and
// det(frd_encode(id)) != 0 for id != 0.
ZqMatrix frd_encode(const ZqVector& id,
                    const std::vector<std::uint64_t>& frd_poly);

}  // namespace ibpre
