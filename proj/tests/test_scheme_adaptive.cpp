// Bit-string-identity scheme: block aggregation behind the per-identity
// matrix and syndrome, the identity-tag trapdoor equation, bit encoding
// roundtrips, extraction exactness, end-to-end and re-encryption roundtrips
// within budget, and full/compact re-key agreement.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibpre/params.hpp"
#include "ibpre/rng.hpp"
#include "ibpre/scheme_adaptive.hpp"
#include "ibpre/zq.hpp"

using namespace ibpre;

namespace {

Rng make_rng(std::uint8_t tag) {
  Seed s{};
  s[3] = tag;
  return Rng(s);
}

// A * [R; I] for A = [A_left | A_right].
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
  PublicParamsA pp;
  MasterKeyA msk;
};

Fixture make_fixture(std::uint8_t tag) {
  ParamSet ps = detail::derive_custom(4, 4, 2.0);
  Rng rng = make_rng(tag);
  auto [pp, msk] = setup_a(ps, rng);
  return Fixture{std::move(ps), std::move(pp), std::move(msk)};
}

IdentityBits bits_from_mask(unsigned mask, std::size_t l) {
  IdentityBits id;
  for (std::size_t i = 0; i < l; ++i)
    id.bits.push_back((mask >> i) & 1 ? 1 : -1);
  return id;
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

}  // namespace

TEST_CASE("block setup publishes negated trapdoor products") {
  Fixture f = make_fixture(1);
  REQUIRE(f.pp.a_blocks.size() == f.ps.l);
  REQUIRE(f.pp.u_list.size() == f.ps.l + 1);
  REQUIRE(f.msk.r_list.size() == f.ps.l);
  CHECK(f.pp.a_bar.rows == f.ps.n);
  CHECK(f.pp.a_bar.cols == f.ps.mbar);

  for (std::size_t t = 0; t < f.ps.l; ++t) {
    CHECK(f.pp.a_blocks[t].rows == f.ps.n);
    CHECK(f.pp.a_blocks[t].cols == f.ps.nk());
    CHECK(f.msk.r_list[t].rows == f.ps.mbar);
    CHECK(f.msk.r_list[t].cols == f.ps.nk());
    // a_t = -A_bar R_t, so A_bar R_t + a_t = 0.
    ZqMatrix prod = mat_mul_int(f.pp.a_bar, f.msk.r_list[t]);
    for (std::size_t e = 0; e < prod.a.size(); ++e)
      CHECK(add_mod(prod.a[e], f.pp.a_blocks[t].a[e], f.ps.q) == 0);
  }

  // A parameter set without identity bits cannot host this scheme.
  ParamSet sel = detail::derive_custom(4, 0, 2.0);
  Rng rng = make_rng(2);
  CHECK_THROWS_AS(setup_a(sel, rng), std::invalid_argument);
}

TEST_CASE("identity data obeys the aggregation and tag equations") {
  Fixture f = make_fixture(3);
  const ParamSet& ps = f.ps;
  ZqMatrix g_mat = gadget_matrix(ps.n, ps.k, ps.q);

  for (unsigned mask : {0u, 0b1111u, 0b0110u, 0b1001u}) {
    IdentityBits id = bits_from_mask(mask, ps.l);
    IdentityData data = derive_identity_data(f.pp, id);
    CHECK(data.a_id.rows == ps.n);
    CHECK(data.a_id.cols == ps.m);

    // Left block is A_bar verbatim.
    for (std::size_t i = 0; i < ps.n; ++i)
      for (std::size_t j = 0; j < ps.mbar; ++j)
        CHECK(data.a_id.at(i, j) == f.pp.a_bar.at(i, j));

    // Right block recomputed directly: sum b_t a_t + G.
    for (std::size_t i = 0; i < ps.n; ++i)
      for (std::size_t j = 0; j < ps.nk(); ++j) {
        std::uint64_t want = g_mat.at(i, j);
        for (std::size_t t = 0; t < ps.l; ++t) {
          std::uint64_t v = f.pp.a_blocks[t].at(i, j);
          want = id.bits[t] > 0 ? add_mod(want, v, ps.q)
                                : sub_mod(want, v, ps.q);
        }
        CHECK(data.a_id.at(i, ps.mbar + j) == want);
      }

    // Trapdoor equation with tag I and R_id = sum b_t R_t.
    IntMatrix r_id(ps.mbar, ps.nk());
    for (std::size_t t = 0; t < ps.l; ++t)
      for (std::size_t e = 0; e < r_id.a.size(); ++e)
        r_id.a[e] += id.bits[t] * f.msk.r_list[t].a[e];
    CHECK(apply_trapdoor(data.a_id, r_id, ps) == g_mat);

    // Syndrome aggregation: u_id = u_0 + sum b_t u_t.
    for (std::size_t j = 0; j < ps.n; ++j) {
      std::uint64_t want = f.pp.u_list[0][j];
      for (std::size_t t = 0; t < ps.l; ++t)
        want = id.bits[t] > 0 ? add_mod(want, f.pp.u_list[t + 1][j], ps.q)
                              : sub_mod(want, f.pp.u_list[t + 1][j], ps.q);
      CHECK(data.u_id[j] == want);
    }
  }

  // Opposite identities average to the base syndrome: u_id + u_(-id) = 2u_0.
  IdentityBits plus = bits_from_mask(0b0101u, ps.l);
  IdentityBits minus = bits_from_mask(0b1010u, ps.l);
  ZqVector up = derive_identity_data(f.pp, plus).u_id;
  ZqVector um = derive_identity_data(f.pp, minus).u_id;
  for (std::size_t j = 0; j < ps.n; ++j)
    CHECK(add_mod(up[j], um[j], ps.q) ==
          add_mod(f.pp.u_list[0][j], f.pp.u_list[0][j], ps.q));

  IdentityBits shortid = bits_from_mask(0, ps.l - 1);
  CHECK_THROWS_AS(derive_identity_data(f.pp, shortid), std::invalid_argument);
  IdentityBits badbit = bits_from_mask(0, ps.l);
  badbit.bits[1] = 0;
  CHECK_THROWS_AS(derive_identity_data(f.pp, badbit), std::invalid_argument);
}

TEST_CASE("signed-bit encodings roundtrip and reject other residues") {
  const std::uint64_t q = 1048727699;
  for (unsigned mask = 0; mask < 16; ++mask) {
    IdentityBits id = bits_from_mask(mask, 4);
    ZqVector v = id_to_zq(id, q);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(v[i] == (id.bits[i] > 0 ? 1 : q - 1));
    IdentityBits back = id_from_zq(v);
    CHECK(back.bits == id.bits);
  }
  ZqVector bad(q, 3);
  bad[0] = 1;
  bad[1] = 2;  // neither 1 nor q-1
  bad[2] = q - 1;
  CHECK_THROWS_AS(id_from_zq(bad), std::invalid_argument);
  ZqVector zero(q, 1);
  CHECK_THROWS_AS(id_from_zq(zero), std::invalid_argument);
}

TEST_CASE("bit hashing is deterministic, signed and roughly balanced") {
  IdentityBits a = hash_identity_bits("alice", 4);
  CHECK(a.bits == hash_identity_bits("alice", 4).bits);
  CHECK(a.bits.size() == 4);
  for (int b : a.bits) CHECK((b == 1 || b == -1));
  CHECK(hash_identity_bits("alice", 4).bits !=
        hash_identity_bits("alicf", 4).bits);

  // A request longer than one digest spans counter blocks.
  IdentityBits longid = hash_identity_bits("seed", 300);
  CHECK(longid.bits.size() == 300);
  int plus = 0;
  for (int b : longid.bits) plus += b > 0;
  CHECK(plus > 100);
  CHECK(plus < 200);
  CHECK_THROWS_AS(hash_identity_bits("x", 0), std::invalid_argument);
}

TEST_CASE("extraction solves the per-identity equation with short output") {
  Fixture f = make_fixture(4);
  const double norm_bound =
      f.ps.s * std::sqrt(static_cast<double>(f.ps.m));

  for (unsigned mask : {0b0000u, 0b1111u, 0b0101u}) {
    IdentityBits id = bits_from_mask(mask, f.ps.l);
    Rng rng = make_rng(5).derive(mask);
    UserSecret sk = extract_a(f.pp, f.msk, id, rng);
    CHECK(sk.id == id_to_zq(id, f.ps.q));
    CHECK(sk.x.size() == f.ps.m);
    IdentityData data = derive_identity_data(f.pp, id);
    CHECK(mat_vec_int(data.a_id, sk.x) == data.u_id);
    CHECK(norm(sk.x) < norm_bound);
  }

  MasterKeyA truncated;
  truncated.r_list.assign(f.msk.r_list.begin(), f.msk.r_list.end() - 1);
  IdentityBits id = bits_from_mask(0b0011u, f.ps.l);
  Rng rng = make_rng(6);
  CHECK_THROWS_AS(extract_a(f.pp, truncated, id, rng),
                  std::invalid_argument);
}

TEST_CASE("adaptive encrypt/decrypt roundtrips stay inside the budget") {
  Fixture f = make_fixture(7);
  BudgetReport rep = validate(f.ps);
  REQUIRE(rep.valid());
  Rng rng = make_rng(8);

  int failures = 0;
  for (unsigned mask = 0; mask < 8; ++mask) {
    IdentityBits id = bits_from_mask(mask * 2 + 1, f.ps.l);
    UserSecret sk = extract_a(f.pp, f.msk, id, rng);
    for (int t = 0; t < 12; ++t) {
      const int bit = t & 1;
      Ciphertext ct = encrypt_a(f.pp, id, bit, rng);
      if (decrypt_a(f.pp, sk, ct) != bit) ++failures;
      // The shared decryption routine is what decrypt_a runs.
      CHECK(decrypt_a(f.pp, sk, ct) == decrypt_bit(f.ps.q, sk.x, ct));
      const double res = static_cast<double>(
          decrypt_residue(f.ps.q, sk.x, ct, bit));
      CHECK(std::abs(res) < rep.b_fresh);
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("adaptive re-encryption decrypts under the delegatee within "
          "budget") {
  Fixture f = make_fixture(9);
  BudgetReport rep = validate(f.ps);
  Rng rng = make_rng(10);

  int failures = 0;
  for (unsigned pair = 0; pair < 3; ++pair) {
    IdentityBits ida = bits_from_mask(pair + 1, f.ps.l);
    IdentityBits idb = bits_from_mask(pair + 9, f.ps.l);
    UserSecret ska = extract_a(f.pp, f.msk, ida, rng);
    UserSecret skb = extract_a(f.pp, f.msk, idb, rng);
    ReKeyCompact rk = rekeygen_a_compact(f.pp, ska, ida, idb, rng);
    CHECK(rk.from_id == id_to_zq(ida, f.ps.q));
    CHECK(rk.to_id == id_to_zq(idb, f.ps.q));

    for (int t = 0; t < 10; ++t) {
      const int bit = t & 1;
      Ciphertext ct2 = reencrypt(f.ps, rk, encrypt_a(f.pp, ida, bit, rng));
      if (decrypt_a(f.pp, skb, ct2) != bit) ++failures;
      const double res = static_cast<double>(
          decrypt_residue(f.ps.q, skb.x, ct2, bit));
      CHECK(std::abs(res) < rep.b_reenc);
    }
  }
  CHECK(failures == 0);

  // The supplied secret must belong to from_id.
  IdentityBits ida = bits_from_mask(1, f.ps.l);
  IdentityBits idb = bits_from_mask(2, f.ps.l);
  UserSecret ska = extract_a(f.pp, f.msk, ida, rng);
  CHECK_THROWS_AS(rekeygen_a(f.pp, ska, idb, ida, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(rekeygen_a_compact(f.pp, ska, idb, ida, rng),
                  std::invalid_argument);
}

TEST_CASE("adaptive compact and full re-keys agree bit for bit") {
  Fixture f = make_fixture(11);
  const std::size_t mk = f.ps.m * f.ps.k;
  IdentityBits ida = bits_from_mask(0b0101u, f.ps.l);
  IdentityBits idb = bits_from_mask(0b0011u, f.ps.l);
  Rng rng = make_rng(12);
  UserSecret ska = extract_a(f.pp, f.msk, ida, rng);
  IdentityData to = derive_identity_data(f.pp, idb);

  SUBCASE("with forced shared randomness") {
    IntMatrix r1 = patterned_int_mat(mk, f.ps.n);
    IntVector r2 = patterned_int_vec(mk);
    ReKey full = testhooks::rekey_full_forced(
        f.ps, ska.x, to.a_id, to.u_id, id_to_zq(ida, f.ps.q),
        id_to_zq(idb, f.ps.q), r1, r2);
    ReKeyCompact compact = testhooks::rekey_compact_forced(
        f.ps, ska.x, to.a_id, to.u_id, id_to_zq(ida, f.ps.q),
        id_to_zq(idb, f.ps.q), r1, r2);
    for (int t = 0; t < 3; ++t) {
      Ciphertext ct = encrypt_a(f.pp, ida, t & 1, rng);
      CHECK(reencrypt(f.ps, full, ct) == reencrypt(f.ps, compact, ct));
    }
  }

  SUBCASE("with the same seed through the public api") {
    Rng ra = make_rng(13);
    Rng rb = make_rng(13);
    ReKey full = rekeygen_a(f.pp, ska, ida, idb, ra);
    ReKeyCompact compact = rekeygen_a_compact(f.pp, ska, ida, idb, rb);
    Ciphertext ct = encrypt_a(f.pp, ida, 1, rng);
    CHECK(reencrypt(f.ps, full, ct) == reencrypt(f.ps, compact, ct));
  }
}
