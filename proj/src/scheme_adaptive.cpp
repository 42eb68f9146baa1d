// scheme_adaptive.cpp

#include "ibpre/scheme_adaptive.hpp"

#include <openssl/sha.h>

#include <array>
#include <cstring>
#include <stdexcept>

#include "ibpre/gaussian.hpp"

namespace ibpre {

namespace {

void require_bits(const IdentityBits& id, const ParamSet& ps,
                  const char* where) {
  if (ps.l == 0 || id.bits.size() != ps.l)
    throw std::invalid_argument(std::string(where) + ": identity length");
  for (int b : id.bits)
    if (b != -1 && b != 1)
      throw std::invalid_argument(std::string(where) + ": bits must be +-1");
}

}  // namespace

std::pair<PublicParamsA, MasterKeyA> setup_a(const ParamSet& ps, Rng& rng) {
  if (ps.l == 0) throw std::invalid_argument("setup_a: l must be >= 1");
  BudgetReport rep = validate(ps);
  if (!rep.valid()) throw std::invalid_argument("setup_a: invalid parameters");
  const std::size_t nk = ps.nk();

  PublicParamsA pp;
  MasterKeyA msk;
  pp.params = ps;
  pp.a_bar = ZqMatrix(ps.q, ps.n, ps.mbar);
  for (auto& x : pp.a_bar.a) x = rng.uniform_below(ps.q);

  pp.a_blocks.reserve(ps.l);
  msk.r_list.reserve(ps.l);
  for (std::size_t i = 0; i < ps.l; ++i) {
    IntMatrix r = sample_mat(ps.mbar, nk, ps.r, rng);
    ZqMatrix prod = mat_mul_int(pp.a_bar, r);
    for (auto& x : prod.a) x = x == 0 ? 0 : ps.q - x;  // a_i = -A_bar R_i
    pp.a_blocks.push_back(std::move(prod));
    msk.r_list.push_back(std::move(r));
  }
  pp.u_list.reserve(ps.l + 1);
  for (std::size_t i = 0; i <= ps.l; ++i) {
    ZqVector u(ps.q, ps.n);
    for (std::size_t j = 0; j < ps.n; ++j) u[j] = rng.uniform_below(ps.q);
    pp.u_list.push_back(std::move(u));
  }
  return {std::move(pp), std::move(msk)};
}

IdentityBits hash_identity_bits(const std::string& id, std::size_t l) {
  if (l == 0) throw std::invalid_argument("hash_identity_bits: l must be >= 1");
  IdentityBits out;
  out.bits.reserve(l);
  std::array<std::uint8_t, SHA256_DIGEST_LENGTH> digest{};
  std::vector<std::uint8_t> block(id.begin(), id.end());
  block.resize(id.size() + 4, 0);
  for (std::uint32_t counter = 0; out.bits.size() < l; ++counter) {
    for (std::size_t b = 0; b < 4; ++b)
      block[id.size() + b] =
          static_cast<std::uint8_t>((counter >> (8 * b)) & 0xff);
    SHA256(block.data(), block.size(), digest.data());
    for (std::size_t j = 0; j < 8 * digest.size() && out.bits.size() < l; ++j)
      out.bits.push_back(((digest[j / 8] >> (j % 8)) & 1) != 0 ? 1 : -1);
  }
  return out;
}

ZqVector id_to_zq(const IdentityBits& id, std::uint64_t q) {
  ZqVector out(q, id.bits.size());
  for (std::size_t i = 0; i < id.bits.size(); ++i)
    out[i] = id.bits[i] > 0 ? 1 : q - 1;
  return out;
}

IdentityBits id_from_zq(const ZqVector& v) {
  IdentityBits out;
  out.bits.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 1)
      out.bits.push_back(1);
    else if (v[i] == v.q - 1)
      out.bits.push_back(-1);
    else
      throw std::invalid_argument("id_from_zq: entry is not +-1");
  }
  return out;
}

IdentityData derive_identity_data(const PublicParamsA& pp,
                                  const IdentityBits& id) {
  const ParamSet& ps = pp.params;
  require_bits(id, ps, "derive_identity_data");
  const std::size_t nk = ps.nk();

  IdentityData out;
  out.a_id = ZqMatrix(ps.q, ps.n, ps.m);
  for (std::size_t i = 0; i < ps.n; ++i) {
    std::uint64_t* row = out.a_id.row(i);
    const std::uint64_t* brow = pp.a_bar.row(i);
    for (std::size_t j = 0; j < ps.mbar; ++j) row[j] = brow[j];
  }
  for (std::size_t t = 0; t < ps.l; ++t) {
    const ZqMatrix& blk = pp.a_blocks[t];
    const bool plus = id.bits[t] > 0;
    for (std::size_t i = 0; i < ps.n; ++i) {
      std::uint64_t* row = out.a_id.row(i) + ps.mbar;
      const std::uint64_t* brow = blk.row(i);
      for (std::size_t j = 0; j < nk; ++j)
        row[j] = plus ? add_mod(row[j], brow[j], ps.q)
                      : sub_mod(row[j], brow[j], ps.q);
    }
  }
  // + G: identity-tag gadget on the right block.
  for (std::size_t c = 0; c < ps.n; ++c) {
    std::uint64_t v = 1 % ps.q;
    for (unsigned j = 0; j < ps.k; ++j) {
      std::size_t col = ps.mbar + c * ps.k + j;
      out.a_id.at(c, col) = add_mod(out.a_id.at(c, col), v, ps.q);
      v = add_mod(v, v, ps.q);
    }
  }

  out.u_id = pp.u_list[0];
  for (std::size_t t = 0; t < ps.l; ++t) {
    const ZqVector& u = pp.u_list[t + 1];
    for (std::size_t j = 0; j < ps.n; ++j)
      out.u_id[j] = id.bits[t] > 0 ? add_mod(out.u_id[j], u[j], ps.q)
                                   : sub_mod(out.u_id[j], u[j], ps.q);
  }
  return out;
}

UserSecret extract_a(const PublicParamsA& pp, const MasterKeyA& msk,
                     const IdentityBits& id, Rng& rng) {
  const ParamSet& ps = pp.params;
  require_bits(id, ps, "extract_a");
  if (msk.r_list.size() != ps.l)
    throw std::invalid_argument("extract_a: master key length");

  IntMatrix r_id(ps.mbar, ps.nk());
  for (std::size_t t = 0; t < ps.l; ++t) {
    const IntMatrix& r = msk.r_list[t];
    if (id.bits[t] > 0)
      for (std::size_t e = 0; e < r_id.a.size(); ++e) r_id.a[e] += r.a[e];
    else
      for (std::size_t e = 0; e < r_id.a.size(); ++e) r_id.a[e] -= r.a[e];
  }

  IdentityData data = derive_identity_data(pp, id);
  ZqMatrix eye(ps.q, ps.n, ps.n);
  for (std::size_t i = 0; i < ps.n; ++i) eye.at(i, i) = 1 % ps.q;
  PreimageSampler sampler(ps, r_id, ps.s);
  IntVector x = sampler.sample(data.a_id, eye, data.u_id, rng);
  return UserSecret{id_to_zq(id, ps.q), std::move(x)};
}

Ciphertext encrypt_a(const PublicParamsA& pp, const IdentityBits& id, int bit,
                     Rng& rng) {
  IdentityData data = derive_identity_data(pp, id);
  return encrypt_core(pp.params, data.a_id, data.u_id, bit, rng);
}

int decrypt_a(const PublicParamsA& pp, const UserSecret& sk,
              const Ciphertext& ct) {
  return decrypt_bit(pp.params.q, sk.x, ct);
}

ReKey rekeygen_a(const PublicParamsA& pp, const UserSecret& sk_from,
                 const IdentityBits& from_id, const IdentityBits& to_id,
                 Rng& rng) {
  const ParamSet& ps = pp.params;
  require_bits(from_id, ps, "rekeygen_a");
  require_bits(to_id, ps, "rekeygen_a");
  if (!(sk_from.id == id_to_zq(from_id, ps.q)))
    throw std::invalid_argument("rekeygen_a: secret does not match from_id");
  IdentityData to = derive_identity_data(pp, to_id);
  return rekey_full(ps, sk_from.x, to.a_id, to.u_id,
                    id_to_zq(from_id, ps.q), id_to_zq(to_id, ps.q), rng);
}

ReKeyCompact rekeygen_a_compact(const PublicParamsA& pp,
                                const UserSecret& sk_from,
                                const IdentityBits& from_id,
                                const IdentityBits& to_id, Rng& rng) {
  const ParamSet& ps = pp.params;
  require_bits(from_id, ps, "rekeygen_a");
  require_bits(to_id, ps, "rekeygen_a");
  if (!(sk_from.id == id_to_zq(from_id, ps.q)))
    throw std::invalid_argument("rekeygen_a: secret does not match from_id");
  IdentityData to = derive_identity_data(pp, to_id);
  return rekey_compact(ps, sk_from.x, to.a_id, to.u_id,
                       id_to_zq(from_id, ps.q), id_to_zq(to_id, ps.q), rng);
}

}  // namespace ibpre
