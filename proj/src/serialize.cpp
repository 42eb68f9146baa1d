// serialize.cpp

#include "ibpre/serialize.hpp"

#include <cstring>
#include <fstream>

namespace ibpre {

namespace {

constexpr char kMagic[6] = {'I', 'B', 'P', 'R', 'E', '1'};

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back((v >> (8 * i)) & 0xff);
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void vec(const ZqVector& v) {
    u64(v.size());
    for (std::uint64_t x : v.v) u64(x);
  }
  void vec(const IntVector& v) {
    u64(v.size());
    for (std::int64_t x : v.v) i64(x);
  }
  void mat(const ZqMatrix& m) {
    u64(m.rows);
    u64(m.cols);
    for (std::uint64_t x : m.a) u64(x);
  }
  void mat(const IntMatrix& m) {
    u64(m.rows);
    u64(m.cols);
    for (std::int64_t x : m.a) i64(x);
  }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(const Bytes& in) : in_(in) {}

  std::uint8_t u8() {
    if (pos_ >= in_.size()) throw SerializeError("truncated envelope");
    return in_[pos_++];
  }
  std::uint64_t u64() {
    if (in_.size() - pos_ < 8) throw SerializeError("truncated envelope");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

  // Declared sizes are cross-checked against expectations from the header.
  ZqVector vec_zq(std::uint64_t q, std::size_t want) {
    std::uint64_t len = u64();
    if (len != want) throw SerializeError("vector length mismatch");
    ZqVector v(q, want);
    for (std::size_t i = 0; i < want; ++i) {
      v[i] = u64();
      if (v[i] >= q) throw SerializeError("entry out of range");
    }
    return v;
  }
  IntVector vec_int(std::size_t want) {
    std::uint64_t len = u64();
    if (len != want) throw SerializeError("vector length mismatch");
    IntVector v(want);
    for (std::size_t i = 0; i < want; ++i) v[i] = i64();
    return v;
  }
  ZqMatrix mat_zq(std::uint64_t q, std::size_t rows, std::size_t cols) {
    if (u64() != rows || u64() != cols)
      throw SerializeError("matrix shape mismatch");
    ZqMatrix m(q, rows, cols);
    for (auto& x : m.a) {
      x = u64();
      if (x >= q) throw SerializeError("entry out of range");
    }
    return m;
  }
  IntMatrix mat_int(std::size_t rows, std::size_t cols) {
    if (u64() != rows || u64() != cols)
      throw SerializeError("matrix shape mismatch");
    IntMatrix m(rows, cols);
    for (auto& x : m.a) x = i64();
    return m;
  }
  void done() const {
    if (pos_ != in_.size()) throw SerializeError("trailing bytes");
  }

 private:
  const Bytes& in_;
  std::size_t pos_ = 0;
};

void write_header(Writer& w, SchemeTag scheme, ObjectTag object,
                  const ParamSet& ps) {
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u8(static_cast<std::uint8_t>(scheme));
  w.u8(static_cast<std::uint8_t>(object));
  w.u64(ps.n);
  w.u64(ps.q);
  w.u64(ps.k);
  w.u64(ps.mbar);
  w.u64(ps.m);
  w.u64(ps.l);
  w.u64(ps.frd_poly.size());
  for (std::uint64_t c : ps.frd_poly) w.u64(c);
}

ParamSet read_header(Reader& r, SchemeTag want_scheme, ObjectTag want_object) {
  for (char c : kMagic)
    if (r.u8() != static_cast<std::uint8_t>(c))
      throw SerializeError("bad magic");
  if (r.u8() != static_cast<std::uint8_t>(want_scheme))
    throw SerializeError("scheme tag mismatch");
  if (r.u8() != static_cast<std::uint8_t>(want_object))
    throw SerializeError("object tag mismatch");

  ParamSet ps;
  ps.n = r.u64();
  ps.q = r.u64();
  std::uint64_t k = r.u64();
  ps.mbar = r.u64();
  ps.m = r.u64();
  ps.l = r.u64();
  if (ps.n == 0 || ps.q < 2 || k == 0 || k > 63)
    throw SerializeError("header out of range");
  ps.k = static_cast<unsigned>(k);
  if (ps.m != ps.mbar + ps.nk() || ps.mbar == 0)
    throw SerializeError("header dimensions inconsistent");
  std::uint64_t flen = r.u64();
  if (flen != ps.n + 1) throw SerializeError("identity polynomial length");
  ps.frd_poly.resize(flen);
  for (auto& c : ps.frd_poly) {
    c = r.u64();
    if (c >= ps.q) throw SerializeError("entry out of range");
  }
  recompute_reals(ps);
  return ps;
}

std::size_t id_len(SchemeTag scheme, const ParamSet& ps) {
  return scheme == SchemeTag::selective ? ps.n : ps.l;
}

}  // namespace

std::pair<SchemeTag, ObjectTag> peek_tags(const Bytes& in) {
  if (in.size() < 8) throw SerializeError("truncated envelope");
  for (std::size_t i = 0; i < 6; ++i)
    if (in[i] != static_cast<std::uint8_t>(kMagic[i]))
      throw SerializeError("bad magic");
  if (in[6] > 1 || in[7] > 5) throw SerializeError("unknown tag");
  return {static_cast<SchemeTag>(in[6]), static_cast<ObjectTag>(in[7])};
}

Bytes serialize_params(SchemeTag scheme, const ParamSet& ps) {
  Writer w;
  write_header(w, scheme, ObjectTag::params, ps);
  return w.take();
}

Bytes serialize_public(const PublicParams& pp) {
  Writer w;
  write_header(w, SchemeTag::selective, ObjectTag::public_params, pp.params);
  w.mat(pp.a_mat);
  w.vec(pp.u);
  return w.take();
}

Bytes serialize_public(const PublicParamsA& pp) {
  Writer w;
  write_header(w, SchemeTag::adaptive, ObjectTag::public_params, pp.params);
  w.mat(pp.a_bar);
  for (const ZqMatrix& blk : pp.a_blocks) w.mat(blk);
  for (const ZqVector& u : pp.u_list) w.vec(u);
  return w.take();
}

Bytes serialize_master(SchemeTag scheme, const ParamSet& ps,
                       const MasterKey& msk) {
  Writer w;
  write_header(w, scheme, ObjectTag::master_key, ps);
  w.mat(msk.r_mat);
  return w.take();
}

Bytes serialize_master(SchemeTag scheme, const ParamSet& ps,
                       const MasterKeyA& msk) {
  Writer w;
  write_header(w, scheme, ObjectTag::master_key, ps);
  for (const IntMatrix& r : msk.r_list) w.mat(r);
  return w.take();
}

Bytes serialize_secret(SchemeTag scheme, const ParamSet& ps,
                       const UserSecret& sk) {
  Writer w;
  write_header(w, scheme, ObjectTag::user_secret, ps);
  w.vec(sk.id);
  w.vec(sk.x);
  return w.take();
}

Bytes serialize_rekey(SchemeTag scheme, const ParamSet& ps, const ReKey& rk) {
  Writer w;
  write_header(w, scheme, ObjectTag::rekey, ps);
  w.vec(rk.from_id);
  w.vec(rk.to_id);
  w.mat(rk.mat);
  return w.take();
}

Bytes serialize_ciphertext(SchemeTag scheme, const ParamSet& ps,
                           const Ciphertext& ct) {
  Writer w;
  write_header(w, scheme, ObjectTag::ciphertext, ps);
  w.vec(ct.c1);
  w.u64(ct.c2);
  return w.take();
}

ParamSet parse_params(const Bytes& in, SchemeTag scheme) {
  Reader r(in);
  ParamSet ps = read_header(r, scheme, ObjectTag::params);
  r.done();
  return ps;
}

PublicParams parse_public_selective(const Bytes& in) {
  Reader r(in);
  PublicParams pp;
  pp.params = read_header(r, SchemeTag::selective, ObjectTag::public_params);
  pp.a_mat = r.mat_zq(pp.params.q, pp.params.n, pp.params.m);
  pp.u = r.vec_zq(pp.params.q, pp.params.n);
  r.done();
  return pp;
}

PublicParamsA parse_public_adaptive(const Bytes& in) {
  Reader r(in);
  PublicParamsA pp;
  pp.params = read_header(r, SchemeTag::adaptive, ObjectTag::public_params);
  const ParamSet& ps = pp.params;
  if (ps.l == 0) throw SerializeError("adaptive object requires l >= 1");
  pp.a_bar = r.mat_zq(ps.q, ps.n, ps.mbar);
  pp.a_blocks.reserve(ps.l);
  for (std::size_t i = 0; i < ps.l; ++i)
    pp.a_blocks.push_back(r.mat_zq(ps.q, ps.n, ps.nk()));
  pp.u_list.reserve(ps.l + 1);
  for (std::size_t i = 0; i <= ps.l; ++i)
    pp.u_list.push_back(r.vec_zq(ps.q, ps.n));
  r.done();
  return pp;
}

std::pair<ParamSet, MasterKey> parse_master_selective(const Bytes& in) {
  Reader r(in);
  ParamSet ps = read_header(r, SchemeTag::selective, ObjectTag::master_key);
  MasterKey msk{r.mat_int(ps.mbar, ps.nk())};
  r.done();
  return {std::move(ps), std::move(msk)};
}

std::pair<ParamSet, MasterKeyA> parse_master_adaptive(const Bytes& in) {
  Reader r(in);
  ParamSet ps = read_header(r, SchemeTag::adaptive, ObjectTag::master_key);
  if (ps.l == 0) throw SerializeError("adaptive object requires l >= 1");
  MasterKeyA msk;
  msk.r_list.reserve(ps.l);
  for (std::size_t i = 0; i < ps.l; ++i)
    msk.r_list.push_back(r.mat_int(ps.mbar, ps.nk()));
  r.done();
  return {std::move(ps), std::move(msk)};
}

std::pair<ParamSet, UserSecret> parse_secret(const Bytes& in,
                                             SchemeTag scheme) {
  Reader r(in);
  ParamSet ps = read_header(r, scheme, ObjectTag::user_secret);
  UserSecret sk;
  sk.id = r.vec_zq(ps.q, id_len(scheme, ps));
  sk.x = r.vec_int(ps.m);
  r.done();
  return {std::move(ps), std::move(sk)};
}

std::pair<ParamSet, ReKey> parse_rekey(const Bytes& in, SchemeTag scheme) {
  Reader r(in);
  ParamSet ps = read_header(r, scheme, ObjectTag::rekey);
  ReKey rk;
  rk.from_id = r.vec_zq(ps.q, id_len(scheme, ps));
  rk.to_id = r.vec_zq(ps.q, id_len(scheme, ps));
  rk.mat = r.mat_zq(ps.q, ps.m * ps.k + 1, ps.m + 1);
  r.done();
  return {std::move(ps), std::move(rk)};
}

std::pair<ParamSet, Ciphertext> parse_ciphertext(const Bytes& in,
                                                 SchemeTag scheme) {
  Reader r(in);
  ParamSet ps = read_header(r, scheme, ObjectTag::ciphertext);
  Ciphertext ct;
  ct.c1 = r.vec_zq(ps.q, ps.m);
  ct.c2 = r.u64();
  if (ct.c2 >= ps.q) throw SerializeError("entry out of range");
  r.done();
  return {std::move(ps), std::move(ct)};
}

Bytes read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SerializeError("cannot open file: " + path);
  Bytes data((std::istreambuf_iterator<char>(f)),
             std::istreambuf_iterator<char>());
  if (!f.good() && !f.eof()) throw SerializeError("read error: " + path);
  return data;
}

void write_file(const std::string& path, const Bytes& data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw SerializeError("cannot open file for write: " + path);
  f.write(reinterpret_cast<const char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
  if (!f.good()) throw SerializeError("write error: " + path);
}

}  // namespace ibpre
