// scheme.cpp - shared ciphertext algebra for both schemes.

#include "ibpre/scheme.hpp"

#include <cmath>
#include <stdexcept>

#include "ibpre/gaussian.hpp"

namespace ibpre {

namespace {

std::uint64_t bprime(std::uint64_t q, const IntVector& x,
                     const Ciphertext& ct) {
  if (x.size() != ct.c1.size())
    throw std::invalid_argument("decrypt: key/ciphertext dimension mismatch");
  return sub_mod(ct.c2, dot_int(x, ct.c1), q);
}

// Assembles only the parts shared by full and compact re-keys.
struct RekeyParts {
  IntMatrix r1;   // mk x n
  ZqVector w;     // mk
};

RekeyParts rekey_parts(const ParamSet& ps, const IntVector& x_from,
                       const ZqVector& u_to, const IntMatrix& r1,
                       const IntVector& r2) {
  const std::size_t mk = ps.m * ps.k;
  if (x_from.size() != ps.m)
    throw std::invalid_argument("rekey: delegator secret has wrong length");
  if (u_to.size() != ps.n || u_to.q != ps.q)
    throw std::invalid_argument("rekey: syndrome mismatch");
  if (r1.rows != mk || r1.cols != ps.n || r2.size() != mk)
    throw std::invalid_argument("rekey: randomness shape mismatch");
  ZqVector w = mat_int_vec(r1, u_to);
  ZqVector px = p2_int(x_from, ps.k, ps.q);
  for (std::size_t i = 0; i < mk; ++i)
    w[i] = sub_mod(add_mod(w[i], lift_mod(r2[i], ps.q), ps.q), px[i], ps.q);
  return RekeyParts{r1, std::move(w)};
}

ReKey assemble_full(const ParamSet& ps, const RekeyParts& parts,
                    const ZqMatrix& a_to, const ZqVector& from_id,
                    const ZqVector& to_id) {
  if (a_to.rows != ps.n || a_to.cols != ps.m || a_to.q != ps.q)
    throw std::invalid_argument("rekey: delegatee matrix mismatch");
  const std::size_t mk = ps.m * ps.k;
  ZqMatrix prod = mat_int_mul(parts.r1, a_to);  // mk x m
  ReKey rk;
  rk.mat = ZqMatrix(ps.q, mk + 1, ps.m + 1);
  for (std::size_t i = 0; i < mk; ++i) {
    std::uint64_t* row = rk.mat.row(i);
    const std::uint64_t* prow = prod.row(i);
    for (std::size_t j = 0; j < ps.m; ++j) row[j] = prow[j];
    row[ps.m] = parts.w[i];
  }
  rk.mat.at(mk, ps.m) = 1 % ps.q;
  rk.from_id = from_id;
  rk.to_id = to_id;
  return rk;
}

// [bd(c1) | c2] as a Z_q row of length mk+1.
ZqVector expand_input(const ParamSet& ps, const Ciphertext& ct) {
  if (ct.c1.size() != ps.m || ct.c1.q != ps.q)
    throw std::invalid_argument("reencrypt: ciphertext dimension mismatch");
  IntVector digits = bd(ct.c1, ps.k);
  ZqVector in(ps.q, ps.m * ps.k + 1);
  for (std::size_t i = 0; i < digits.size(); ++i)
    in[i] = static_cast<std::uint64_t>(digits[i]);
  in[digits.size()] = ct.c2;
  return in;
}

}  // namespace

int decrypt_bit(std::uint64_t q, const IntVector& x, const Ciphertext& ct) {
  const std::uint64_t bp = bprime(q, x, ct);
  const std::uint64_t mid = q / 2;
  const std::uint64_t dist0 = std::min(bp, q - bp);
  const std::uint64_t dist1 = bp >= mid ? bp - mid : mid - bp;
  return dist0 < dist1 ? 0 : 1;
}

std::int64_t decrypt_residue(std::uint64_t q, const IntVector& x,
                             const Ciphertext& ct, int bit) {
  const std::uint64_t bp = bprime(q, x, ct);
  return center_mod(sub_mod(bp, bit ? q / 2 : 0, q), q);
}

Ciphertext encrypt_core(const ParamSet& ps, const ZqMatrix& a_id,
                        const ZqVector& u_id, int bit, Rng& rng) {
  if (a_id.rows != ps.n || a_id.cols != ps.m || u_id.size() != ps.n)
    throw std::invalid_argument("encrypt: shape mismatch");
  const double aq = ps.alpha_q();

  ZqVector s(ps.q, ps.n);
  for (std::size_t i = 0; i < ps.n; ++i) s[i] = rng.uniform_below(ps.q);

  IntVector e(ps.m);
  long double e0_sq = 0.0L;
  for (std::size_t i = 0; i < ps.mbar; ++i) {
    e[i] = sample_z(0.0, aq, rng);
    e0_sq += static_cast<long double>(e[i]) * e[i];
  }
  const double s_prime =
      ps.r * std::sqrt(static_cast<double>(e0_sq) +
                       static_cast<double>(ps.mbar) * aq * aq);
  for (std::size_t i = 0; i < ps.nk(); ++i)
    e[ps.mbar + i] = sample_z(0.0, s_prime, rng);

  Ciphertext ct;
  ct.c1 = mat_tvec(a_id, s);
  for (std::size_t i = 0; i < ps.m; ++i)
    ct.c1[i] = add_mod(ct.c1[i], lift_mod(e[i], ps.q), ps.q);
  const std::int64_t e_scalar = sample_z(0.0, aq, rng);
  ct.c2 = add_mod(dot(u_id, s), lift_mod(e_scalar, ps.q), ps.q);
  if (bit) ct.c2 = add_mod(ct.c2, ps.q / 2, ps.q);
  return ct;
}

ReKey rekey_full(const ParamSet& ps, const IntVector& x_from,
                 const ZqMatrix& a_to, const ZqVector& u_to,
                 const ZqVector& from_id, const ZqVector& to_id, Rng& rng) {
  const std::size_t mk = ps.m * ps.k;
  IntMatrix r1 = sample_mat(mk, ps.n, ps.r, rng);
  IntVector r2 = sample_vec(mk, ps.r, rng);
  return assemble_full(ps, rekey_parts(ps, x_from, u_to, r1, r2), a_to,
                       from_id, to_id);
}

ReKeyCompact rekey_compact(const ParamSet& ps, const IntVector& x_from,
                           const ZqMatrix& a_to, const ZqVector& u_to,
                           const ZqVector& from_id, const ZqVector& to_id,
                           Rng& rng) {
  if (a_to.rows != ps.n || a_to.cols != ps.m || a_to.q != ps.q)
    throw std::invalid_argument("rekey: delegatee matrix mismatch");
  const std::size_t mk = ps.m * ps.k;
  IntMatrix r1 = sample_mat(mk, ps.n, ps.r, rng);
  IntVector r2 = sample_vec(mk, ps.r, rng);
  RekeyParts parts = rekey_parts(ps, x_from, u_to, r1, r2);
  return ReKeyCompact{std::move(parts.r1), std::move(parts.w), a_to, from_id,
                      to_id};
}

Ciphertext reencrypt(const ParamSet& ps, const ReKey& rk,
                     const Ciphertext& ct) {
  const std::size_t mk = ps.m * ps.k;
  if (rk.mat.rows != mk + 1 || rk.mat.cols != ps.m + 1)
    throw std::invalid_argument("reencrypt: re-key dimension mismatch");
  ZqVector out = mat_tvec(rk.mat, expand_input(ps, ct));
  Ciphertext res;
  res.c1 = ZqVector(ps.q, ps.m);
  for (std::size_t i = 0; i < ps.m; ++i) res.c1[i] = out[i];
  res.c2 = out[ps.m];
  return res;
}

Ciphertext reencrypt(const ParamSet& ps, const ReKeyCompact& rk,
                     const Ciphertext& ct) {
  const std::size_t mk = ps.m * ps.k;
  if (rk.r1.rows != mk || rk.r1.cols != ps.n || rk.w.size() != mk ||
      rk.a_to.rows != ps.n || rk.a_to.cols != ps.m)
    throw std::invalid_argument("reencrypt: re-key dimension mismatch");
  if (ct.c1.size() != ps.m || ct.c1.q != ps.q)
    throw std::invalid_argument("reencrypt: ciphertext dimension mismatch");
  IntVector d = bd(ct.c1, ps.k);
  ZqVector digits = lift_vec(d, ps.q);
  // [d^t | c2] * [[R1 A | w], [0 | 1]] = ((d^t R1) A | d^t w + c2).
  ZqVector folded = tvec_int(rk.r1, digits);  // length n
  Ciphertext res;
  res.c1 = mat_tvec(rk.a_to, folded);
  res.c2 = add_mod(ct.c2, dot(digits, rk.w), ps.q);
  return res;
}

#ifdef IBPRE_ENABLE_TEST_HOOKS
namespace testhooks {

Ciphertext encrypt_forced(const ParamSet& ps, const ZqMatrix& a_id,
                          const ZqVector& u_id, int bit, const ZqVector& s,
                          const IntVector& e_vec, std::int64_t e_scalar) {
  if (a_id.rows != ps.n || a_id.cols != ps.m || u_id.size() != ps.n ||
      s.size() != ps.n || e_vec.size() != ps.m)
    throw std::invalid_argument("encrypt_forced: shape mismatch");
  Ciphertext ct;
  ct.c1 = mat_tvec(a_id, s);
  for (std::size_t i = 0; i < ps.m; ++i)
    ct.c1[i] = add_mod(ct.c1[i], lift_mod(e_vec[i], ps.q), ps.q);
  ct.c2 = add_mod(dot(u_id, s), lift_mod(e_scalar, ps.q), ps.q);
  if (bit) ct.c2 = add_mod(ct.c2, ps.q / 2, ps.q);
  return ct;
}

ReKey rekey_full_forced(const ParamSet& ps, const IntVector& x_from,
                        const ZqMatrix& a_to, const ZqVector& u_to,
                        const ZqVector& from_id, const ZqVector& to_id,
                        const IntMatrix& r1, const IntVector& r2) {
  return assemble_full(ps, rekey_parts(ps, x_from, u_to, r1, r2), a_to,
                       from_id, to_id);
}

ReKeyCompact rekey_compact_forced(const ParamSet& ps, const IntVector& x_from,
                                  const ZqMatrix& a_to, const ZqVector& u_to,
                                  const ZqVector& from_id,
                                  const ZqVector& to_id, const IntMatrix& r1,
                                  const IntVector& r2) {
  if (a_to.rows != ps.n || a_to.cols != ps.m || a_to.q != ps.q)
    throw std::invalid_argument("rekey: delegatee matrix mismatch");
  RekeyParts parts = rekey_parts(ps, x_from, u_to, r1, r2);
  return ReKeyCompact{std::move(parts.r1), std::move(parts.w), a_to, from_id,
                      to_id};
}

}  // namespace testhooks
#endif

}  // namespace ibpre
