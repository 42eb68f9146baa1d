// scheme_selective.hpp - identity-based proxy re-encryption with identities
// in Z_q^n (nonzero), tagged by a full-rank-difference encoding.
//
// Public data is A = [A_bar | -A_bar*R] with master key R; the matrix for an
// identity adds H_id * G to the right block, so extraction inverts through a
// tag that is invertible for every nonzero identity and differs by a
// full-rank matrix between any two distinct identities.

#pragma once

#include <string>

#include "ibpre/scheme.hpp"
#include "ibpre/trapdoor.hpp"

namespace ibpre {

struct PublicParams {
  ZqMatrix a_mat;  // n x m, trapdoor equation with tag 0
  ZqVector u;      // length n
  ParamSet params;
};

struct MasterKey {
  IntMatrix r_mat;  // mbar x nk at width r
};

std::pair<PublicParams, MasterKey> setup(const ParamSet& ps, Rng& rng);

// Maps an arbitrary identity string into Z_q^n \ {0}: a 256-bit digest is
// expanded into n base-q digits; the (astronomically unlikely) zero vector
// retries with a counter appended to the digest.
ZqVector hash_identity(const std::string& id, std::size_t n, std::uint64_t q);

// A_id = [A_bar | -A_bar*R + H_id*G], computable from public data alone.
ZqMatrix build_a_id(const PublicParams& pp, const ZqVector& id);

// Caches the master key's preimage sampler; extraction per identity is then
// one tag encoding plus one sample.
class Extractor {
 public:
  Extractor(const PublicParams& pp, const MasterKey& msk);
  UserSecret extract(const ZqVector& id, Rng& rng) const;

 private:
  PublicParams pp_;
  PreimageSampler sampler_;
};

// One-shot extraction (constructs the sampler; prefer Extractor in loops).
UserSecret extract(const PublicParams& pp, const MasterKey& msk,
                   const ZqVector& id, Rng& rng);

Ciphertext encrypt(const PublicParams& pp, const ZqVector& id, int bit,
                   Rng& rng);
int decrypt(const PublicParams& pp, const UserSecret& sk, const Ciphertext& ct);

// Non-interactive: consumes the delegator secret and the delegatee identity
// only (no master key, no delegatee secret).
ReKey rekeygen(const PublicParams& pp, const UserSecret& sk_from,
               const ZqVector& from_id, const ZqVector& to_id, Rng& rng);
ReKeyCompact rekeygen_compact(const PublicParams& pp,
                              const UserSecret& sk_from,
                              const ZqVector& from_id, const ZqVector& to_id,
                              Rng& rng);

}  // namespace ibpre
