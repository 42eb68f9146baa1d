// ibpre_cli.cpp - command-line surface over the library.
//
// Subcommands: setup, extract, encrypt, decrypt, rekey, reencrypt,
// validate-params, harness.  Every key-material output is one envelope file;
// a message ciphertext file is a container: u64 bit count, then one
// length-prefixed ciphertext envelope per message bit (least-significant bit
// of each byte first).
//
// Exit codes: 0 success; 2 validation failure (bad flags, invalid or
// mismatched parameters, identity errors); 3 decode failure (malformed or
// truncated envelope files).

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "ibpre/harness.hpp"

namespace {

using namespace ibpre;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDecode = 3;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SchemeTag parse_scheme(const std::string& s) {
  if (s == "selective") return SchemeTag::selective;
  if (s == "adaptive") return SchemeTag::adaptive;
  throw CliError("unknown scheme: " + s);
}

Rng make_rng(const std::string& seed_hex) {
  if (!seed_hex.empty()) return Rng(parse_seed_hex(seed_hex));
  if (const char* env = std::getenv("IBPRE_SEED"); env && *env)
    return Rng(parse_seed_hex(env));
  return Rng(random_seed());
}

bool same_params(const ParamSet& a, const ParamSet& b) {
  return a.n == b.n && a.q == b.q && a.k == b.k && a.mbar == b.mbar &&
         a.m == b.m && a.l == b.l && a.frd_poly == b.frd_poly;
}

void require_same_params(const ParamSet& a, const ParamSet& b,
                         const char* what) {
  if (!same_params(a, b))
    throw CliError(std::string("parameter header mismatch: ") + what);
}

// ---- message ciphertext container ------------------------------------

void append_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

std::uint64_t take_u64(const Bytes& in, std::size_t& pos) {
  if (in.size() - pos < 8) throw SerializeError("truncated container");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
  pos += 8;
  return v;
}

Bytes pack_records(std::uint64_t bit_count, const std::vector<Bytes>& records) {
  Bytes out;
  append_u64(out, bit_count);
  for (const Bytes& r : records) {
    append_u64(out, r.size());
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

std::pair<std::uint64_t, std::vector<Bytes>> unpack_records(const Bytes& in) {
  std::size_t pos = 0;
  const std::uint64_t bits = take_u64(in, pos);
  std::vector<Bytes> records;
  records.reserve(bits);
  for (std::uint64_t i = 0; i < bits; ++i) {
    const std::uint64_t len = take_u64(in, pos);
    if (in.size() - pos < len) throw SerializeError("truncated container");
    records.emplace_back(in.begin() + pos, in.begin() + pos + len);
    pos += len;
  }
  if (pos != in.size()) throw SerializeError("trailing bytes in container");
  return {bits, std::move(records)};
}

// ---- per-subcommand options -------------------------------------------

struct Options {
  std::string scheme = "selective";
  std::string seed;
  std::string params;   // public-params envelope (--params)
  std::string in;       // generic input (--in)
  std::string out;      // generic output (--out)
  std::string id;       // identity string (--id)
  std::string to_id;    // delegatee identity string (--to-id)
  std::string message;  // message bytes file (--message)
  std::string msk;      // master-key envelope
  std::string msk_out;  // master-key output (setup)
  std::string params_out;  // bare params envelope output (setup)
  std::string usk;      // user-secret envelope
  std::string rekey;    // re-key envelope
  std::string mode = "all";  // harness section selector
  std::size_t n = 32;
  std::size_t l = 0;  // 0 = scheme default (selective unused, adaptive 128)
  double margin = 2.0;
  std::uint64_t trials = 1000;
  std::uint64_t per_id = 0;  // 0 = scheme default
};

ParamSet derive_for(SchemeTag scheme, const Options& o) {
  const std::size_t l =
      scheme == SchemeTag::adaptive ? (o.l == 0 ? 128 : o.l) : 0;
  return derive(o.n, l, o.margin);
}

int cmd_setup(const Options& o) {
  const SchemeTag scheme = parse_scheme(o.scheme);
  Rng rng = make_rng(o.seed);
  ParamSet ps = o.params.empty()
                    ? derive_for(scheme, o)
                    : parse_params(read_file(o.params), scheme);
  if (scheme == SchemeTag::selective) {
    auto [pp, msk] = setup(ps, rng);
    write_file(o.out, serialize_public(pp));
    write_file(o.msk_out, serialize_master(scheme, ps, msk));
  } else {
    auto [pp, msk] = setup_a(ps, rng);
    write_file(o.out, serialize_public(pp));
    write_file(o.msk_out, serialize_master(scheme, ps, msk));
  }
  if (!o.params_out.empty())
    write_file(o.params_out, serialize_params(scheme, ps));
  return kExitOk;
}

int cmd_validate_params(const Options& o) {
  const SchemeTag scheme = parse_scheme(o.scheme);
  const Bytes in = read_file(o.params);
  ParamSet ps;
  if (peek_tags(in).second == ObjectTag::params) {
    ps = parse_params(in, scheme);
  } else if (scheme == SchemeTag::selective) {
    ps = parse_public_selective(in).params;
  } else {
    ps = parse_public_adaptive(in).params;
  }
  const BudgetReport rep = validate(ps);
  std::printf("n=%zu q=%llu k=%u mbar=%zu m=%zu l=%zu\n", ps.n,
              static_cast<unsigned long long>(ps.q), ps.k, ps.mbar, ps.m,
              ps.l);
  std::printf("b_fresh=%.6g b_reenc=%.6g ratio_fresh=%.6g ratio_reenc=%.6g\n",
              rep.b_fresh, rep.b_reenc, rep.ratio_fresh, rep.ratio_reenc);
  std::printf("structure_ok=%d alpha_degenerate=%d valid=%d\n",
              rep.structure_ok ? 1 : 0, rep.alpha_degenerate ? 1 : 0,
              rep.valid() ? 1 : 0);
  return rep.valid() ? kExitOk : kExitValidation;
}

int cmd_extract(const Options& o) {
  const SchemeTag scheme = parse_scheme(o.scheme);
  Rng rng = make_rng(o.seed);
  if (scheme == SchemeTag::selective) {
    PublicParams pp = parse_public_selective(read_file(o.params));
    auto [msk_ps, msk] = parse_master_selective(read_file(o.msk));
    require_same_params(pp.params, msk_ps, "master key vs public params");
    ZqVector id = hash_identity(o.id, pp.params.n, pp.params.q);
    UserSecret sk = extract(pp, msk, id, rng);
    write_file(o.out, serialize_secret(scheme, pp.params, sk));
  } else {
    PublicParamsA pp = parse_public_adaptive(read_file(o.params));
    auto [msk_ps, msk] = parse_master_adaptive(read_file(o.msk));
    require_same_params(pp.params, msk_ps, "master key vs public params");
    IdentityBits id = hash_identity_bits(o.id, pp.params.l);
    UserSecret sk = extract_a(pp, msk, id, rng);
    write_file(o.out, serialize_secret(scheme, pp.params, sk));
  }
  return kExitOk;
}

int cmd_encrypt(const Options& o) {
  const SchemeTag scheme = parse_scheme(o.scheme);
  Rng rng = make_rng(o.seed);
  const Bytes msg = read_file(o.message);
  const std::uint64_t bits = 8 * static_cast<std::uint64_t>(msg.size());
  std::vector<Bytes> records;
  records.reserve(bits);

  if (scheme == SchemeTag::selective) {
    PublicParams pp = parse_public_selective(read_file(o.params));
    ZqVector id = hash_identity(o.id, pp.params.n, pp.params.q);
    ZqMatrix a_id = build_a_id(pp, id);
    for (std::uint64_t i = 0; i < bits; ++i) {
      const int bit = (msg[i / 8] >> (i % 8)) & 1;
      Ciphertext ct = encrypt_core(pp.params, a_id, pp.u, bit, rng);
      records.push_back(serialize_ciphertext(scheme, pp.params, ct));
    }
  } else {
    PublicParamsA pp = parse_public_adaptive(read_file(o.params));
    IdentityBits id = hash_identity_bits(o.id, pp.params.l);
    IdentityData data = derive_identity_data(pp, id);
    for (std::uint64_t i = 0; i < bits; ++i) {
      const int bit = (msg[i / 8] >> (i % 8)) & 1;
      Ciphertext ct = encrypt_core(pp.params, data.a_id, data.u_id, bit, rng);
      records.push_back(serialize_ciphertext(scheme, pp.params, ct));
    }
  }
  write_file(o.out, pack_records(bits, records));
  return kExitOk;
}

int cmd_decrypt(const Options& o) {
  const SchemeTag scheme = parse_scheme(o.scheme);
  auto [sk_ps, sk] = parse_secret(read_file(o.usk), scheme);
  auto [bits, records] = unpack_records(read_file(o.in));
  Bytes msg((bits + 7) / 8, 0);
  for (std::uint64_t i = 0; i < bits; ++i) {
    auto [ct_ps, ct] = parse_ciphertext(records[i], scheme);
    require_same_params(sk_ps, ct_ps, "ciphertext vs user secret");
    if (decrypt_bit(sk_ps.q, sk.x, ct))
      msg[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  write_file(o.out, msg);
  return kExitOk;
}

int cmd_rekey(const Options& o) {
  const SchemeTag scheme = parse_scheme(o.scheme);
  Rng rng = make_rng(o.seed);
  auto [sk_ps, sk] = parse_secret(read_file(o.usk), scheme);
  if (scheme == SchemeTag::selective) {
    PublicParams pp = parse_public_selective(read_file(o.params));
    require_same_params(pp.params, sk_ps, "user secret vs public params");
    ZqVector to = hash_identity(o.to_id, pp.params.n, pp.params.q);
    ReKey rk = rekeygen(pp, sk, sk.id, to, rng);
    write_file(o.out, serialize_rekey(scheme, pp.params, rk));
  } else {
    PublicParamsA pp = parse_public_adaptive(read_file(o.params));
    require_same_params(pp.params, sk_ps, "user secret vs public params");
    IdentityBits from = id_from_zq(sk.id);
    IdentityBits to = hash_identity_bits(o.to_id, pp.params.l);
    ReKey rk = rekeygen_a(pp, sk, from, to, rng);
    write_file(o.out, serialize_rekey(scheme, pp.params, rk));
  }
  return kExitOk;
}

int cmd_reencrypt(const Options& o) {
  const SchemeTag scheme = parse_scheme(o.scheme);
  auto [rk_ps, rk] = parse_rekey(read_file(o.rekey), scheme);
  auto [bits, records] = unpack_records(read_file(o.in));
  std::vector<Bytes> out_records;
  out_records.reserve(records.size());
  for (const Bytes& rec : records) {
    auto [ct_ps, ct] = parse_ciphertext(rec, scheme);
    require_same_params(rk_ps, ct_ps, "ciphertext vs re-key");
    Ciphertext ct2 = reencrypt(rk_ps, rk, ct);
    out_records.push_back(serialize_ciphertext(scheme, rk_ps, ct2));
  }
  write_file(o.out, pack_records(bits, out_records));
  return kExitOk;
}

int cmd_harness(const Options& o) {
  const SchemeTag scheme = parse_scheme(o.scheme);
  Rng rng = make_rng(o.seed);
  ParamSet ps;
  if (!o.params.empty()) {
    const Bytes in = read_file(o.params);
    if (peek_tags(in).second == ObjectTag::params)
      ps = parse_params(in, scheme);
    else
      ps = scheme == SchemeTag::selective
               ? parse_public_selective(in).params
               : parse_public_adaptive(in).params;
  } else {
    ps = derive_for(scheme, o);
  }
  const std::uint64_t per_id =
      o.per_id != 0 ? o.per_id
                    : (scheme == SchemeTag::selective ? 1 : 100);

  std::string csv;
  if (o.mode == "roundtrip" || o.mode == "all") {
    csv += "# roundtrip\n";
    csv += to_csv(roundtrip_trials(scheme, ps, o.trials, rng, per_id));
  }
  if (o.mode == "reenc" || o.mode == "all") {
    csv += "# reenc\n";
    csv += to_csv(reenc_trials(scheme, ps, o.trials, rng, per_id));
  }
  if (o.mode == "samplers" || o.mode == "all") {
    csv += "# samplers\n";
    csv += to_csv(sampler_checks(ps, rng));
  }
  if (o.out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_file(o.out, Bytes(csv.begin(), csv.end()));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"identity-based proxy re-encryption keystore"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scheme", o.scheme, "selective | adaptive")
        ->check(CLI::IsMember({"selective", "adaptive"}));
    cmd->add_option("--seed", o.seed,
                    "64 hex chars; falls back to IBPRE_SEED, then OS entropy");
  };

  CLI::App* c_setup = app.add_subcommand("setup", "derive keys");
  add_common(c_setup);
  c_setup->add_option("--params", o.params, "reuse an existing params file");
  c_setup->add_option("--n", o.n, "lattice dimension (ignored with --params)");
  c_setup->add_option("--l", o.l, "identity bits, adaptive only (default 128)");
  c_setup->add_option("--margin", o.margin, "safety margin for derivation");
  c_setup->add_option("--out", o.out, "public params output")->required();
  c_setup->add_option("--msk-out", o.msk_out, "master key output")->required();
  c_setup->add_option("--params-out", o.params_out,
                      "also write a bare params envelope");

  CLI::App* c_validate =
      app.add_subcommand("validate-params", "check noise budgets");
  add_common(c_validate);
  c_validate->add_option("--params", o.params, "params or public-params file")
      ->required();

  CLI::App* c_extract = app.add_subcommand("extract", "derive a user secret");
  add_common(c_extract);
  c_extract->add_option("--params", o.params, "public params file")
      ->required();
  c_extract->add_option("--msk", o.msk, "master key file")->required();
  c_extract->add_option("--id", o.id, "identity string")->required();
  c_extract->add_option("--out", o.out, "user secret output")->required();

  CLI::App* c_encrypt = app.add_subcommand("encrypt", "encrypt a message");
  add_common(c_encrypt);
  c_encrypt->add_option("--params", o.params, "public params file")
      ->required();
  c_encrypt->add_option("--id", o.id, "recipient identity")->required();
  c_encrypt->add_option("--message", o.message, "plaintext bytes file")
      ->required();
  c_encrypt->add_option("--out", o.out, "ciphertext container output")
      ->required();

  CLI::App* c_decrypt = app.add_subcommand("decrypt", "decrypt a message");
  add_common(c_decrypt);
  c_decrypt->add_option("--usk", o.usk, "user secret file")->required();
  c_decrypt->add_option("--in", o.in, "ciphertext container")->required();
  c_decrypt->add_option("--out", o.out, "plaintext output")->required();

  CLI::App* c_rekey = app.add_subcommand("rekey", "make a re-encryption key");
  add_common(c_rekey);
  c_rekey->add_option("--params", o.params, "public params file")->required();
  c_rekey->add_option("--usk", o.usk, "delegator secret file")->required();
  c_rekey->add_option("--to-id", o.to_id, "delegatee identity")->required();
  c_rekey->add_option("--out", o.out, "re-key output")->required();

  CLI::App* c_reenc =
      app.add_subcommand("reencrypt", "transform a ciphertext container");
  add_common(c_reenc);
  c_reenc->add_option("--rekey", o.rekey, "re-key file")->required();
  c_reenc->add_option("--in", o.in, "ciphertext container")->required();
  c_reenc->add_option("--out", o.out, "re-encrypted container output")
      ->required();

  CLI::App* c_harness =
      app.add_subcommand("harness", "Monte-Carlo correctness trials");
  add_common(c_harness);
  c_harness->add_option("--params", o.params, "params or public-params file");
  c_harness->add_option("--n", o.n, "derive: lattice dimension");
  c_harness->add_option("--l", o.l, "derive: identity bits (adaptive)");
  c_harness->add_option("--margin", o.margin, "derive: safety margin");
  c_harness->add_option("--trials", o.trials, "trial count per section");
  c_harness->add_option("--per-id", o.per_id,
                        "trials sharing one identity/pair (0 = default)");
  c_harness->add_option("--mode", o.mode, "roundtrip | reenc | samplers | all")
      ->check(CLI::IsMember({"roundtrip", "reenc", "samplers", "all"}));
  c_harness->add_option("--out", o.out, "CSV output (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (app.got_subcommand(c_setup)) return cmd_setup(o);
    if (app.got_subcommand(c_validate)) return cmd_validate_params(o);
    if (app.got_subcommand(c_extract)) return cmd_extract(o);
    if (app.got_subcommand(c_encrypt)) return cmd_encrypt(o);
    if (app.got_subcommand(c_decrypt)) return cmd_decrypt(o);
    if (app.got_subcommand(c_rekey)) return cmd_rekey(o);
    if (app.got_subcommand(c_reenc)) return cmd_reencrypt(o);
    if (app.got_subcommand(c_harness)) return cmd_harness(o);
  } catch (const SerializeError& e) {
    std::fprintf(stderr, "decode error: %s\n", e.what());
    return kExitDecode;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}
