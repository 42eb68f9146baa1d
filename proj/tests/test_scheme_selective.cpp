// Selective scheme: trapdoor equations behind setup/extract, identity
// hashing, exact ciphertext algebra under forced randomness (noise-free
// identities that pin the decryption equation), the re-encryption residue
// identity, full/compact re-key agreement, and end-to-end roundtrips with
// residues inside the validated budget.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibpre/frd.hpp"
#include "ibpre/params.hpp"
#include "ibpre/rng.hpp"
#include "ibpre/scheme_selective.hpp"
#include "ibpre/zq.hpp"

using namespace ibpre;

namespace {

Rng make_rng(std::uint8_t tag) {
  Seed s{};
  s[2] = tag;
  return Rng(s);
}

// A * [R; I] for A = [A_left | A_right]: the trapdoor equation's left side.
ZqMatrix apply_trapdoor(const ZqMatrix& a, const IntMatrix& r,
                        const ParamSet& ps) {
  ZqMatrix left(ps.q, ps.n, ps.mbar), right(ps.q, ps.n, ps.nk());
  for (std::size_t i = 0; i < ps.n; ++i) {
    for (std::size_t j = 0; j < ps.mbar; ++j) left.at(i, j) = a.at(i, j);
    for (std::size_t j = 0; j < ps.nk(); ++j)
      right.at(i, j) = a.at(i, ps.mbar + j);
  }
  ZqMatrix prod = mat_mul_int(left, r);
  for (std::size_t i = 0; i < prod.a.size(); ++i)
    prod.a[i] = add_mod(prod.a[i], right.a[i], ps.q);
  return prod;
}

struct Fixture {
  ParamSet ps;
  PublicParams pp;
  MasterKey msk;
};

Fixture make_fixture(std::uint8_t tag) {
  ParamSet ps = detail::derive_custom(4, 0, 2.0);
  Rng rng = make_rng(tag);
  auto [pp, msk] = setup(ps, rng);
  return Fixture{std::move(ps), std::move(pp), std::move(msk)};
}

IntMatrix patterned_int_mat(std::size_t rows, std::size_t cols) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m.at(i, j) = static_cast<std::int64_t>((3 * i + 5 * j) % 7) - 3;
  return m;
}

IntVector patterned_int_vec(std::size_t dim) {
  IntVector v(dim);
  for (std::size_t i = 0; i < dim; ++i)
    v[i] = static_cast<std::int64_t>(i % 11) - 5;
  return v;
}

std::uint64_t raw_bprime(std::uint64_t q, const IntVector& x,
                         const Ciphertext& ct) {
  return sub_mod(ct.c2, dot_int(x, ct.c1), q);
}

}  // namespace

TEST_CASE("setup output satisfies the zero-tag trapdoor equation") {
  Fixture f = make_fixture(1);
  CHECK(f.pp.a_mat.rows == f.ps.n);
  CHECK(f.pp.a_mat.cols == f.ps.m);
  CHECK(f.pp.u.size() == f.ps.n);
  CHECK(f.msk.r_mat.rows == f.ps.mbar);
  CHECK(f.msk.r_mat.cols == f.ps.nk());

  ZqMatrix lhs = apply_trapdoor(f.pp.a_mat, f.msk.r_mat, f.ps);
  for (std::uint64_t v : lhs.a) CHECK(v == 0);

  // Distinct seeds give distinct public matrices.
  Fixture g = make_fixture(2);
  CHECK_FALSE(f.pp.a_mat == g.pp.a_mat);

  // A parameter set that fails validation is rejected outright.
  ParamSet broken = f.ps;
  broken.q = broken.q - 1;  // composite, structure check fails
  Rng rng = make_rng(3);
  CHECK_THROWS_AS(setup(broken, rng), std::invalid_argument);
}

TEST_CASE("identity hashing is deterministic, nonzero and well-ranged") {
  const std::uint64_t q = 1048727699;
  ZqVector a1 = hash_identity("alice", 4, q);
  ZqVector a2 = hash_identity("alice", 4, q);
  CHECK(a1 == a2);
  CHECK(a1.size() == 4);
  CHECK(a1.q == q);

  bool nonzero = false;
  for (std::size_t i = 0; i < a1.size(); ++i) {
    CHECK(a1[i] < q);
    nonzero = nonzero || a1[i] != 0;
  }
  CHECK(nonzero);

  // Distinct strings map to distinct vectors (these particular ones do).
  CHECK_FALSE(a1 == hash_identity("bob", 4, q));
  CHECK_FALSE(a1 == hash_identity("alice ", 4, q));
  // The digest is reduced consistently for other shapes too.
  ZqVector tiny = hash_identity("alice", 2, 13);
  CHECK(tiny.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(tiny[i] < 13);
  CHECK_THROWS_AS(hash_identity("x", 0, q), std::invalid_argument);
  CHECK_THROWS_AS(hash_identity("x", 4, 1), std::invalid_argument);
}

TEST_CASE("per-identity matrix satisfies the tagged trapdoor equation") {
  Fixture f = make_fixture(4);
  ZqMatrix g_mat = gadget_matrix(f.ps.n, f.ps.k, f.ps.q);

  for (const char* name : {"alice", "bob", "carol"}) {
    ZqVector id = hash_identity(name, f.ps.n, f.ps.q);
    ZqMatrix a_id = build_a_id(f.pp, id);
    CHECK(a_id.rows == f.ps.n);
    CHECK(a_id.cols == f.ps.m);
    // The uniform block is untouched.
    for (std::size_t i = 0; i < f.ps.n; ++i)
      for (std::size_t j = 0; j < f.ps.mbar; ++j)
        CHECK(a_id.at(i, j) == f.pp.a_mat.at(i, j));
    ZqMatrix lhs = apply_trapdoor(a_id, f.msk.r_mat, f.ps);
    ZqMatrix rhs = mat_mul(frd_encode(id, f.ps.frd_poly), g_mat);
    CHECK(lhs == rhs);
  }

  ZqVector zero(f.ps.q, f.ps.n);
  CHECK_THROWS_AS(build_a_id(f.pp, zero), std::invalid_argument);
  ZqVector shaped(f.ps.q, f.ps.n + 1);
  shaped[0] = 1;
  CHECK_THROWS_AS(build_a_id(f.pp, shaped), std::invalid_argument);
}

TEST_CASE("extraction yields short exact solutions and the cached sampler "
          "matches the one-shot path") {
  Fixture f = make_fixture(5);
  Extractor ex(f.pp, f.msk);
  const double norm_bound =
      f.ps.s * std::sqrt(static_cast<double>(f.ps.m));

  for (int t = 0; t < 8; ++t) {
    ZqVector id =
        hash_identity("user" + std::to_string(t), f.ps.n, f.ps.q);
    Rng r1 = make_rng(10).derive(static_cast<std::uint64_t>(t));
    UserSecret sk = ex.extract(id, r1);
    CHECK(sk.id == id);
    CHECK(sk.x.size() == f.ps.m);
    CHECK(mat_vec_int(build_a_id(f.pp, id), sk.x) == f.pp.u);
    CHECK(norm(sk.x) < norm_bound);

    // One-shot extraction consumes the same stream the same way.
    Rng r2 = make_rng(10).derive(static_cast<std::uint64_t>(t));
    UserSecret sk2 = extract(f.pp, f.msk, id, r2);
    CHECK(sk2.x == sk.x);
  }

  ZqVector zero(f.ps.q, f.ps.n);
  Rng rng = make_rng(11);
  CHECK_THROWS_AS(ex.extract(zero, rng), std::invalid_argument);
}

TEST_CASE("encrypt/decrypt roundtrips stay inside the validated budget") {
  Fixture f = make_fixture(6);
  BudgetReport rep = validate(f.ps);
  REQUIRE(rep.valid());
  Extractor ex(f.pp, f.msk);
  Rng rng = make_rng(12);

  int failures = 0;
  for (int t = 0; t < 100; ++t) {
    ZqVector id =
        hash_identity("rt" + std::to_string(t % 10), f.ps.n, f.ps.q);
    UserSecret sk = ex.extract(id, rng);
    const int bit = t & 1;
    Ciphertext ct = encrypt(f.pp, id, bit, rng);
    CHECK(ct.c1.size() == f.ps.m);
    if (decrypt(f.pp, sk, ct) != bit) ++failures;
    const double res = static_cast<double>(
        decrypt_residue(f.ps.q, sk.x, ct, bit));
    CHECK(std::abs(res) < rep.b_fresh);
  }
  CHECK(failures == 0);

  ZqVector zero(f.ps.q, f.ps.n);
  CHECK_THROWS_AS(encrypt(f.pp, zero, 0, rng), std::invalid_argument);
}

TEST_CASE("forced randomness pins the exact ciphertext equations") {
  Fixture f = make_fixture(7);
  const std::uint64_t q = f.ps.q;
  ZqVector id = hash_identity("alice", f.ps.n, q);
  ZqMatrix a_id = build_a_id(f.pp, id);
  Rng rng = make_rng(13);
  UserSecret sk = extract(f.pp, f.msk, id, rng);

  ZqVector s_zero(q, f.ps.n);
  IntVector e_zero(f.ps.m);

  SUBCASE("all-zero randomness isolates the message encoding") {
    for (int bit : {0, 1}) {
      Ciphertext ct = testhooks::encrypt_forced(f.ps, a_id, f.pp.u, bit,
                                                s_zero, e_zero, 0);
      for (std::size_t i = 0; i < f.ps.m; ++i) CHECK(ct.c1[i] == 0);
      CHECK(ct.c2 == (bit ? q / 2 : 0));
      CHECK(decrypt(f.pp, sk, ct) == bit);
      CHECK(decrypt_residue(q, sk.x, ct, bit) == 0);
    }
  }

  SUBCASE("zero noise with random s cancels exactly through the key") {
    Rng srng = make_rng(14);
    for (int t = 0; t < 5; ++t) {
      ZqVector s(q, f.ps.n);
      for (std::size_t i = 0; i < f.ps.n; ++i) s[i] = srng.uniform_below(q);
      const int bit = t & 1;
      Ciphertext ct = testhooks::encrypt_forced(f.ps, a_id, f.pp.u, bit, s,
                                                e_zero, 0);
      // c2 - x^t c1 = u^t s - (A_id x)^t s + bit*floor(q/2) and A_id x = u.
      CHECK(decrypt_residue(q, sk.x, ct, bit) == 0);
      CHECK(decrypt(f.pp, sk, ct) == bit);
    }
  }

  SUBCASE("the two encodings differ by exactly floor(q/2)") {
    Rng srng = make_rng(15);
    ZqVector s(q, f.ps.n);
    for (std::size_t i = 0; i < f.ps.n; ++i) s[i] = srng.uniform_below(q);
    IntVector e(f.ps.m);
    for (std::size_t i = 0; i < f.ps.m; ++i)
      e[i] = static_cast<std::int64_t>(i % 9) - 4;
    Ciphertext c0 = testhooks::encrypt_forced(f.ps, a_id, f.pp.u, 0, s, e, 3);
    Ciphertext c1 = testhooks::encrypt_forced(f.ps, a_id, f.pp.u, 1, s, e, 3);
    CHECK(c0.c1 == c1.c1);
    CHECK(sub_mod(c1.c2, c0.c2, q) == q / 2);
  }
}

TEST_CASE("decryption threshold and residue are frozen at q = 13") {
  // floor(q/2) = 6; b' decodes to 0 iff strictly closer to 0 than to 6.
  const std::uint64_t q = 13;
  IntVector x(1);
  Ciphertext ct;
  ct.c1 = ZqVector(q, 1);

  auto bit_of = [&](std::uint64_t bp) {
    ct.c2 = bp;
    return decrypt_bit(q, x, ct);
  };
  CHECK(bit_of(0) == 0);
  CHECK(bit_of(2) == 0);
  CHECK(bit_of(3) == 1);  // equidistant (3 vs 3): ties decode as 1
  CHECK(bit_of(5) == 1);
  CHECK(bit_of(6) == 1);
  CHECK(bit_of(9) == 1);
  CHECK(bit_of(10) == 0);  // dist0 = 3 < dist1 = 4
  CHECK(bit_of(12) == 0);

  ct.c2 = 3;
  CHECK(decrypt_residue(q, x, ct, 0) == 3);
  CHECK(decrypt_residue(q, x, ct, 1) == -3);
  ct.c2 = 12;
  CHECK(decrypt_residue(q, x, ct, 0) == -1);
  CHECK(decrypt_residue(q, x, ct, 1) == 6);

  IntVector wrong(2);
  ct.c2 = 0;
  CHECK_THROWS_AS(decrypt_bit(q, wrong, ct), std::invalid_argument);
}

TEST_CASE("re-key generation shape, stored identities and input checks") {
  Fixture f = make_fixture(8);
  const std::size_t mk = f.ps.m * f.ps.k;
  ZqVector ida = hash_identity("alice", f.ps.n, f.ps.q);
  ZqVector idb = hash_identity("bob", f.ps.n, f.ps.q);
  Rng rng = make_rng(16);
  UserSecret ska = extract(f.pp, f.msk, ida, rng);

  ReKey rk = rekeygen(f.pp, ska, ida, idb, rng);
  CHECK(rk.mat.rows == mk + 1);
  CHECK(rk.mat.cols == f.ps.m + 1);
  CHECK(rk.from_id == ida);
  CHECK(rk.to_id == idb);
  for (std::size_t j = 0; j < f.ps.m; ++j) CHECK(rk.mat.at(mk, j) == 0);
  CHECK(rk.mat.at(mk, f.ps.m) == 1);

  ZqVector zero(f.ps.q, f.ps.n);
  CHECK_THROWS_AS(rekeygen(f.pp, ska, ida, zero, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(rekeygen(f.pp, ska, zero, idb, rng),
                  std::invalid_argument);
  // The supplied secret must belong to from_id.
  CHECK_THROWS_AS(rekeygen(f.pp, ska, idb, ida, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(rekeygen_compact(f.pp, ska, idb, ida, rng),
                  std::invalid_argument);
}

TEST_CASE("re-encryption shifts the residue by exactly r2^t bd(c1)") {
  Fixture f = make_fixture(9);
  const std::uint64_t q = f.ps.q;
  const std::size_t mk = f.ps.m * f.ps.k;
  ZqVector ida = hash_identity("alice", f.ps.n, q);
  ZqVector idb = hash_identity("bob", f.ps.n, q);
  Rng rng = make_rng(17);
  Extractor ex(f.pp, f.msk);
  UserSecret ska = ex.extract(ida, rng);
  UserSecret skb = ex.extract(idb, rng);

  IntMatrix r1 = patterned_int_mat(mk, f.ps.n);
  IntVector r2 = patterned_int_vec(mk);
  ReKey rk = testhooks::rekey_full_forced(f.ps, ska.x, build_a_id(f.pp, idb),
                                          f.pp.u, ida, idb, r1, r2);

  for (int t = 0; t < 6; ++t) {
    Ciphertext ct = encrypt(f.pp, ida, t & 1, rng);
    Ciphertext ct2 = reencrypt(f.ps, rk, ct);

    // b'_to - b'_from = r2^t bd(c1), exactly, mod q.
    const std::uint64_t shift =
        sub_mod(raw_bprime(q, skb.x, ct2), raw_bprime(q, ska.x, ct), q);
    IntVector digits = bd(ct.c1, f.ps.k);
    std::uint64_t want = 0;
    for (std::size_t i = 0; i < mk; ++i)
      if (digits[i])
        want = add_mod(want, lift_mod(r2[i], q), q);
    CHECK(shift == want);
  }
}

TEST_CASE("compact and full re-keys produce bit-identical ciphertexts") {
  Fixture f = make_fixture(10);
  const std::size_t mk = f.ps.m * f.ps.k;
  ZqVector ida = hash_identity("alice", f.ps.n, f.ps.q);
  ZqVector idb = hash_identity("bob", f.ps.n, f.ps.q);
  Rng rng = make_rng(18);
  UserSecret ska = extract(f.pp, f.msk, ida, rng);
  ZqMatrix a_to = build_a_id(f.pp, idb);

  SUBCASE("with forced shared randomness") {
    IntMatrix r1 = patterned_int_mat(mk, f.ps.n);
    IntVector r2 = patterned_int_vec(mk);
    ReKey full = testhooks::rekey_full_forced(f.ps, ska.x, a_to, f.pp.u, ida,
                                              idb, r1, r2);
    ReKeyCompact compact = testhooks::rekey_compact_forced(
        f.ps, ska.x, a_to, f.pp.u, ida, idb, r1, r2);
    CHECK(compact.r1 == r1);
    for (int t = 0; t < 4; ++t) {
      Ciphertext ct = encrypt(f.pp, ida, t & 1, rng);
      CHECK(reencrypt(f.ps, full, ct) == reencrypt(f.ps, compact, ct));
    }
  }

  SUBCASE("with the same seed through the public api") {
    Rng ra = make_rng(19);
    Rng rb = make_rng(19);
    ReKey full = rekeygen(f.pp, ska, ida, idb, ra);
    ReKeyCompact compact = rekeygen_compact(f.pp, ska, ida, idb, rb);
    Ciphertext ct = encrypt(f.pp, ida, 1, rng);
    CHECK(reencrypt(f.ps, full, ct) == reencrypt(f.ps, compact, ct));
  }
}

TEST_CASE("re-encrypted ciphertexts decrypt under the delegatee key within "
          "budget") {
  Fixture f = make_fixture(11);
  BudgetReport rep = validate(f.ps);
  REQUIRE(rep.valid());
  Extractor ex(f.pp, f.msk);
  Rng rng = make_rng(20);

  int failures = 0;
  for (int pair = 0; pair < 5; ++pair) {
    ZqVector ida =
        hash_identity("from" + std::to_string(pair), f.ps.n, f.ps.q);
    ZqVector idb =
        hash_identity("to" + std::to_string(pair), f.ps.n, f.ps.q);
    UserSecret ska = ex.extract(ida, rng);
    UserSecret skb = ex.extract(idb, rng);
    ReKeyCompact rk = rekeygen_compact(f.pp, ska, ida, idb, rng);

    for (int t = 0; t < 10; ++t) {
      const int bit = t & 1;
      Ciphertext ct = encrypt(f.pp, ida, bit, rng);
      Ciphertext ct2 = reencrypt(f.ps, rk, ct);
      // Proxy transparency: the same decryption routine handles both.
      if (decrypt(f.pp, skb, ct2) != bit) ++failures;
      const double res = static_cast<double>(
          decrypt_residue(f.ps.q, skb.x, ct2, bit));
      CHECK(std::abs(res) < rep.b_reenc);
    }
  }
  CHECK(failures == 0);
}
