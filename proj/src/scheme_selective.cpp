// scheme_selective.cpp

#include "ibpre/scheme_selective.hpp"

#include <openssl/sha.h>

#include <array>
#include <cstring>
#include <stdexcept>

#include "ibpre/frd.hpp"

namespace ibpre {

namespace {

bool is_zero_vec(const ZqVector& v) {
  for (std::uint64_t x : v.v)
    if (x != 0) return false;
  return true;
}

void require_identity(const ZqVector& id, const ParamSet& ps,
                      const char* where) {
  if (id.size() != ps.n || id.q != ps.q)
    throw std::invalid_argument(std::string(where) + ": identity shape");
  if (is_zero_vec(id))
    throw std::invalid_argument(std::string(where) + ": zero identity");
}

// Adds tag*G to the right block of a (column-doubling instead of powers).
void add_tag_gadget(ZqMatrix& a, const ZqMatrix& tag, const ParamSet& ps) {
  for (std::size_t i = 0; i < ps.n; ++i)
    for (std::size_t c = 0; c < ps.n; ++c) {
      std::uint64_t v = tag.at(i, c);
      if (v == 0) continue;
      for (unsigned j = 0; j < ps.k; ++j) {
        std::size_t col = ps.mbar + c * ps.k + j;
        a.at(i, col) = add_mod(a.at(i, col), v, ps.q);
        v = add_mod(v, v, ps.q);
      }
    }
}

}  // namespace

std::pair<PublicParams, MasterKey> setup(const ParamSet& ps, Rng& rng) {
  BudgetReport rep = validate(ps);
  if (!rep.valid()) throw std::invalid_argument("setup: invalid parameters");

  ZqMatrix a_bar(ps.q, ps.n, ps.mbar);
  for (auto& x : a_bar.a) x = rng.uniform_below(ps.q);
  ZqMatrix zero_tag(ps.q, ps.n, ps.n);
  TrapPair pair = gen_trapdoor(ps, a_bar, zero_tag, rng);

  PublicParams pp;
  pp.a_mat = std::move(pair.a_mat);
  pp.u = ZqVector(ps.q, ps.n);
  for (std::size_t i = 0; i < ps.n; ++i) pp.u[i] = rng.uniform_below(ps.q);
  pp.params = ps;
  return {std::move(pp), MasterKey{std::move(pair.trapdoor.r_mat)}};
}

ZqVector hash_identity(const std::string& id, std::size_t n, std::uint64_t q) {
  if (n == 0 || q < 2) throw std::invalid_argument("hash_identity: bad shape");
  std::array<std::uint8_t, SHA256_DIGEST_LENGTH> digest{};
  SHA256(reinterpret_cast<const std::uint8_t*>(id.data()), id.size(),
         digest.data());
  for (std::uint8_t counter = 0;; ++counter) {
    // Digest bytes as a little-endian 256-bit integer, four 64-bit limbs.
    std::array<std::uint64_t, 4> limbs{};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t b = 0; b < 8; ++b)
        limbs[i] |= static_cast<std::uint64_t>(digest[8 * i + b]) << (8 * b);

    ZqVector out(q, n);
    bool nonzero = false;
    for (std::size_t d = 0; d < n; ++d) {
      unsigned __int128 rem = 0;
      for (std::size_t i = 4; i-- > 0;) {
        unsigned __int128 cur = (rem << 64) | limbs[i];
        limbs[i] = static_cast<std::uint64_t>(cur / q);
        rem = cur % q;
      }
      out[d] = static_cast<std::uint64_t>(rem);
      nonzero = nonzero || out[d] != 0;
    }
    if (nonzero) return out;
    if (counter == 255)
      throw std::runtime_error("hash_identity: could not avoid zero vector");
    std::array<std::uint8_t, SHA256_DIGEST_LENGTH + 1> retry{};
    std::memcpy(retry.data(), digest.data(), digest.size());
    retry[SHA256_DIGEST_LENGTH] = static_cast<std::uint8_t>(counter + 1);
    SHA256(retry.data(), retry.size(), digest.data());
  }
}

ZqMatrix build_a_id(const PublicParams& pp, const ZqVector& id) {
  const ParamSet& ps = pp.params;
  require_identity(id, ps, "build_a_id");
  ZqMatrix a = pp.a_mat;
  add_tag_gadget(a, frd_encode(id, ps.frd_poly), ps);
  return a;
}

Extractor::Extractor(const PublicParams& pp, const MasterKey& msk)
    : pp_(pp), sampler_(pp.params, msk.r_mat, pp.params.s) {}

UserSecret Extractor::extract(const ZqVector& id, Rng& rng) const {
  const ParamSet& ps = pp_.params;
  require_identity(id, ps, "extract");
  ZqMatrix tag = frd_encode(id, ps.frd_poly);
  ZqMatrix a_id = pp_.a_mat;
  add_tag_gadget(a_id, tag, ps);
  IntVector x = sampler_.sample(a_id, tag, pp_.u, rng);
  return UserSecret{id, std::move(x)};
}

UserSecret extract(const PublicParams& pp, const MasterKey& msk,
                   const ZqVector& id, Rng& rng) {
  return Extractor(pp, msk).extract(id, rng);
}

Ciphertext encrypt(const PublicParams& pp, const ZqVector& id, int bit,
                   Rng& rng) {
  require_identity(id, pp.params, "encrypt");
  return encrypt_core(pp.params, build_a_id(pp, id), pp.u, bit, rng);
}

int decrypt(const PublicParams& pp, const UserSecret& sk,
            const Ciphertext& ct) {
  return decrypt_bit(pp.params.q, sk.x, ct);
}

ReKey rekeygen(const PublicParams& pp, const UserSecret& sk_from,
               const ZqVector& from_id, const ZqVector& to_id, Rng& rng) {
  require_identity(from_id, pp.params, "rekeygen");
  require_identity(to_id, pp.params, "rekeygen");
  if (!(sk_from.id == from_id))
    throw std::invalid_argument("rekeygen: secret does not match from_id");
  return rekey_full(pp.params, sk_from.x, build_a_id(pp, to_id), pp.u,
                    from_id, to_id, rng);
}

ReKeyCompact rekeygen_compact(const PublicParams& pp,
                              const UserSecret& sk_from,
                              const ZqVector& from_id, const ZqVector& to_id,
                              Rng& rng) {
  require_identity(from_id, pp.params, "rekeygen");
  require_identity(to_id, pp.params, "rekeygen");
  if (!(sk_from.id == from_id))
    throw std::invalid_argument("rekeygen: secret does not match from_id");
  return rekey_compact(pp.params, sk_from.x, build_a_id(pp, to_id), pp.u,
                       from_id, to_id, rng);
}

}  // namespace ibpre
