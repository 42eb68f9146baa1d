// scheme.hpp - objects and algorithms shared by both encryption schemes.
//
// Both schemes produce the same Ciphertext shape, and a re-encrypted
// ciphertext is decrypted by the very same routine as a fresh one (proxy
// transparency).  The re-encryption key is a single matrix
//   [[R1 * A_to | R1 * u_to + R2 - P2(x_from)], [0 ... 0 | 1]]
// applied to the row [bd(c1)^t | c2]; the compact form keeps the factors
// (R1, w = R1*u_to + R2 - P2(x_from), A_to) instead of the mk x m product,
// which is gigabytes at production sizes, and yields bit-identical output.

#pragma once

#include <cstdint>

#include "ibpre/params.hpp"
#include "ibpre/rng.hpp"
#include "ibpre/zq.hpp"

namespace ibpre {

struct Ciphertext {
  ZqVector c1;          // length m
  std::uint64_t c2 = 0;
  bool operator==(const Ciphertext&) const = default;
};

struct UserSecret {
  ZqVector id;  // selective: element of Z_q^n; adaptive: l entries in {1, q-1}
  IntVector x;  // length m, satisfies A_id * x = u_id mod q
};

struct ReKey {
  ZqMatrix mat;  // (mk+1) x (m+1), bottom row [0 ... 0 | 1]
  ZqVector from_id;
  ZqVector to_id;
};

// Same re-encryption map as ReKey without materializing R1 * A_to.
struct ReKeyCompact {
  IntMatrix r1;    // mk x n
  ZqVector w;      // length mk: R1*u_to + R2 - P2(x_from)
  ZqMatrix a_to;   // n x m, delegatee matrix
  ZqVector from_id;
  ZqVector to_id;
};

// The one decryption routine: b' = c2 - x^t c1, output 0 iff b' is strictly
// closer to 0 than to floor(q/2) (ties decode as 1).
int decrypt_bit(std::uint64_t q, const IntVector& x, const Ciphertext& ct);

// Centered distance of b' from the encoding of `bit`; decryption is correct
// while |residue| < q/4.
std::int64_t decrypt_residue(std::uint64_t q, const IntVector& x,
                             const Ciphertext& ct, int bit);

// c1 = A_id^t s + (e0, e1), c2 = u_id^t s + e + bit*floor(q/2), with
// s uniform, e0 at width alpha*q, e1 at width r*sqrt(|e0|^2 + mbar(alpha q)^2)
// and scalar e at width alpha*q.
Ciphertext encrypt_core(const ParamSet& ps, const ZqMatrix& a_id,
                        const ZqVector& u_id, int bit, Rng& rng);

// Re-encryption key from delegator secret x_from toward public (a_to, u_to);
// R1, R2 are fresh at width r.
ReKey rekey_full(const ParamSet& ps, const IntVector& x_from,
                 const ZqMatrix& a_to, const ZqVector& u_to,
                 const ZqVector& from_id, const ZqVector& to_id, Rng& rng);
ReKeyCompact rekey_compact(const ParamSet& ps, const IntVector& x_from,
                           const ZqMatrix& a_to, const ZqVector& u_to,
                           const ZqVector& from_id, const ZqVector& to_id,
                           Rng& rng);

// out = ([bd(c1)^t | c2] * mat) split back into (c1', c2'); both overloads
// compute the identical map.
Ciphertext reencrypt(const ParamSet& ps, const ReKey& rk, const Ciphertext& ct);
Ciphertext reencrypt(const ParamSet& ps, const ReKeyCompact& rk,
                     const Ciphertext& ct);

#ifdef IBPRE_ENABLE_TEST_HOOKS
namespace testhooks {

// encrypt_core with every random draw supplied by the caller.
Ciphertext encrypt_forced(const ParamSet& ps, const ZqMatrix& a_id,
                          const ZqVector& u_id, int bit, const ZqVector& s,
                          const IntVector& e_vec, std::int64_t e_scalar);

// rekey assembly with forced R1, R2 (for exact algebraic identities).
ReKey rekey_full_forced(const ParamSet& ps, const IntVector& x_from,
                        const ZqMatrix& a_to, const ZqVector& u_to,
                        const ZqVector& from_id, const ZqVector& to_id,
                        const IntMatrix& r1, const IntVector& r2);
ReKeyCompact rekey_compact_forced(const ParamSet& ps, const IntVector& x_from,
                                  const ZqMatrix& a_to, const ZqVector& u_to,
                                  const ZqVector& from_id,
                                  const ZqVector& to_id, const IntMatrix& r1,
                                  const IntVector& r2);

}  // namespace testhooks
#endif

}  // namespace ibpre
