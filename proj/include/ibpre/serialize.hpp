// serialize.hpp - the bit-exact file envelope for every artifact.
//
// Layout: magic "IBPRE1" (6 bytes), scheme tag (1 byte: 0 selective,
// 1 adaptive), object tag (1 byte), then the parameter header as 8-byte
// little-endian unsigned words in fixed order (n, q, k, mbar, m, l,
// frd_poly length, frd_poly coefficients), then the body.  Vectors are an
// 8-byte length followed by entries; matrices are 8-byte row and column
// counts followed by row-major entries; signed integers are stored as
// mod-2^64 two's complement.  Real-valued parameters are never stored;
// they are recomputed from the integer header on load.  Readers reject any
// magic/tag mismatch, declared-length inconsistency, truncation, or
// trailing bytes.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ibpre/scheme_adaptive.hpp"
#include "ibpre/scheme_selective.hpp"

namespace ibpre {

enum class SchemeTag : std::uint8_t { selective = 0, adaptive = 1 };

enum class ObjectTag : std::uint8_t {
  params = 0,
  public_params = 1,
  master_key = 2,
  user_secret = 3,
  rekey = 4,
  ciphertext = 5,
};

// Thrown on any malformed envelope.
struct SerializeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Bytes = std::vector<std::uint8_t>;

std::pair<SchemeTag, ObjectTag> peek_tags(const Bytes& in);

Bytes serialize_params(SchemeTag scheme, const ParamSet& ps);
Bytes serialize_public(const PublicParams& pp);
Bytes serialize_public(const PublicParamsA& pp);
Bytes serialize_master(SchemeTag scheme, const ParamSet& ps,
                       const MasterKey& msk);
Bytes serialize_master(SchemeTag scheme, const ParamSet& ps,
                       const MasterKeyA& msk);
Bytes serialize_secret(SchemeTag scheme, const ParamSet& ps,
                       const UserSecret& sk);
Bytes serialize_rekey(SchemeTag scheme, const ParamSet& ps, const ReKey& rk);
Bytes serialize_ciphertext(SchemeTag scheme, const ParamSet& ps,
                           const Ciphertext& ct);

// Each parser checks magic, the expected tags, and full-body consistency.
ParamSet parse_params(const Bytes& in, SchemeTag scheme);
PublicParams parse_public_selective(const Bytes& in);
PublicParamsA parse_public_adaptive(const Bytes& in);
std::pair<ParamSet, MasterKey> parse_master_selective(const Bytes& in);
std::pair<ParamSet, MasterKeyA> parse_master_adaptive(const Bytes& in);
std::pair<ParamSet, UserSecret> parse_secret(const Bytes& in,
                                             SchemeTag scheme);
std::pair<ParamSet, ReKey> parse_rekey(const Bytes& in, SchemeTag scheme);
std::pair<ParamSet, Ciphertext> parse_ciphertext(const Bytes& in,
                                                 SchemeTag scheme);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, const Bytes& data);

}  // namespace ibpre
