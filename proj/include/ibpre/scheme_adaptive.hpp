// scheme_adaptive.hpp - the bit-string-identity variant: identities live in
// {-1, +1}^l, the identity matrix aggregates l public blocks, and each
// identity gets its own syndrome u_id = u_0 + sum b_j u_j.
//
// Ciphertexts, secrets, re-keys and the decryption routine are the exact
// same objects as the Z_q^n-identity scheme; only key derivation differs.

#pragma once

#include <string>
#include <vector>

#include "ibpre/scheme.hpp"
#include "ibpre/trapdoor.hpp"

namespace ibpre {

struct IdentityBits {
  std::vector<int> bits;  // entries are -1 or +1, length l
};

struct PublicParamsA {
  ZqMatrix a_bar;                 // n x mbar
  std::vector<ZqMatrix> a_blocks; // l blocks, each n x nk: -A_bar * R_i
  std::vector<ZqVector> u_list;   // l+1 vectors of length n (u_0 first)
  ParamSet params;
};

struct MasterKeyA {
  std::vector<IntMatrix> r_list;  // l matrices mbar x nk at width r
};

std::pair<PublicParamsA, MasterKeyA> setup_a(const ParamSet& ps, Rng& rng);

// Hashes an identity string to l signed bits (digest stream in counter mode).
IdentityBits hash_identity_bits(const std::string& id, std::size_t l);

// Identity bits as stored in UserSecret.id: +1 -> 1, -1 -> q-1.
ZqVector id_to_zq(const IdentityBits& id, std::uint64_t q);
IdentityBits id_from_zq(const ZqVector& v);

struct IdentityData {
  ZqMatrix a_id;  // [A_bar | sum b_j a_j + G], trapdoor tag I
  ZqVector u_id;  // u_0 + sum b_j u_j
};

// Public derivation (no master key).
IdentityData derive_identity_data(const PublicParamsA& pp,
                                  const IdentityBits& id);

UserSecret extract_a(const PublicParamsA& pp, const MasterKeyA& msk,
                     const IdentityBits& id, Rng& rng);

Ciphertext encrypt_a(const PublicParamsA& pp, const IdentityBits& id, int bit,
                     Rng& rng);
int decrypt_a(const PublicParamsA& pp, const UserSecret& sk,
              const Ciphertext& ct);

ReKey rekeygen_a(const PublicParamsA& pp, const UserSecret& sk_from,
                 const IdentityBits& from_id, const IdentityBits& to_id,
                 Rng& rng);
ReKeyCompact rekeygen_a_compact(const PublicParamsA& pp,
                                const UserSecret& sk_from,
                                const IdentityBits& from_id,
                                const IdentityBits& to_id, Rng& rng);

}  // namespace ibpre
