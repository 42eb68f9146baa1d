// trapdoor.cpp - gadget trapdoor construction and the two oracles.
//
// Both oracles work blockwise on the gadget g = (1, 2, ..., 2^(k-1)) mod q.
// The kernel lattice {z : g^t z = 0 mod q} has the standard basis
//   s_i = 2e_i - e_{i+1} (i < k-1),  s_{k-1} = binary digits of q,
// whose Gram-Schmidt vectors have the closed forms
//   st_i = (a_i 2^j for j <= i; -1 at i+1),  a_i = 3*2^(i+1)/(4^(i+1)-1),
//   |st_i|^2 = (4^(i+2)-1)/(4^(i+1)-1)          (chain vectors, <= 5)
//   st_{k-1} = (q/|g|^2) g,  |st_{k-1}|^2 = 3q^2/(4^k-1).
// sample_g runs the randomized nearest-plane over S directly.  invert_g
// decodes against the dual basis D = q*S^{-t} of the image lattice
// {s*g + q*w}: processing d_0..d_{k-1} ascending, the step quotients are
// <t, st_i>/q, so the decode radius is the parallelepiped |<e, st_i>| <= q/2.
// Steps run in exact 128-bit arithmetic when k <= 39 (numerators stay below
// 2^126 for intermediate entries up to 2^(126-2k), far above honest growth),
// with a long-double fallback; a final exact reconstruction check in Z_q
// rejects any drift, so no path can return a wrong answer silently.  The
// nearest-plane region is a parallelepiped that does not quite cover the
// corners of the per-coordinate noise box, so when its result fails the
// checks, an exhaustive interval-intersection decoder takes over and finds
// an in-range decomposition whenever one exists.

#include "ibpre/trapdoor.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "ibpre/gaussian.hpp"

namespace ibpre {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr unsigned kExactDigitMax = 39;

i128 round_div(i128 n, i128 d) {
  // d > 0; rounds half away from zero.
  return n >= 0 ? (n + d / 2) / d : -((-n + d / 2) / d);
}

i128 abs128(i128 x) { return x >= 0 ? x : -x; }

bool is_zero_matrix(const ZqMatrix& m) {
  for (std::uint64_t x : m.a)
    if (x != 0) return false;
  return true;
}

// Subtracts c * d_i from t, where d_i is column i of q*S^{-t}:
// d_i[j] = 2^j * (q >> (i+1)) for j <= i, -2^(j-i-1) * (q mod 2^(i+1)) after.
void subtract_dual_column(std::vector<i128>& t, unsigned i, i128 c,
                          std::uint64_t q) {
  const unsigned k = static_cast<unsigned>(t.size());
  const i128 high = static_cast<i128>(q >> (i + 1));
  const i128 low = static_cast<i128>(q & ((1ull << (i + 1)) - 1));
  for (unsigned j = 0; j <= i; ++j) t[j] -= c * (high << j);
  for (unsigned j = i + 1; j < k; ++j) t[j] += c * (low << (j - i - 1));
}

// Exact dual nearest-plane for one k-digit block; returns false when entry
// growth would overflow the 128-bit numerators (caller falls back).
bool block_decode_exact(std::vector<i128>& t, std::uint64_t q) {
  const unsigned k = static_cast<unsigned>(t.size());
  const i128 guard = static_cast<i128>(1) << (126 - 2 * static_cast<int>(k));
  for (unsigned i = 0; i + 1 < k; ++i) {
    for (const i128& v : t)
      if (abs128(v) > guard) return false;
    i128 w = 0;
    for (unsigned j = 0; j <= i; ++j) w += t[j] << j;
    const i128 dm = (static_cast<i128>(1) << (2 * i + 2)) - 1;  // 4^(i+1)-1
    const i128 num = 3 * (w << (i + 1)) - dm * t[i + 1];
    const i128 c = round_div(num, dm * static_cast<i128>(q));
    if (c != 0) subtract_dual_column(t, i, c, q);
  }
  // Last direction is g itself; quotient is 3<t, g>/(4^k - 1).
  i128 tg = 0;
  for (unsigned j = 0; j < k; ++j) tg += t[j] << j;
  const i128 dm = (static_cast<i128>(1) << (2 * k)) - 1;
  const i128 c = round_div(3 * tg, dm);
  if (c != 0)
    for (unsigned j = 0; j < k; ++j) t[j] -= c << j;
  return true;
}

// Exhaustive fallback decoder for one block.  The admissible noise window
// per digit is e in [-floor(q/4), floor(q/4)] (exactly 4e in [-q, q) over
// the integers), so digit j constrains s to
//   { s : s*2^j mod q falls within floor(q/4) of digits[j] },
// a union of 2^j cyclic arcs.  Intersecting those unions digit by digit
// with exact 128-bit interval arithmetic yields the full solution set, so
// this path finds an in-window decomposition whenever one exists.  The
// nearest-plane fast path can miss solutions whose noise sits near the
// window corners; this one cannot.  Work is capped: inputs pathological
// enough to exceed the cap get a failure signal rather than a stall.
std::optional<std::uint64_t> block_decode_complete(const std::uint64_t* digits,
                                                   unsigned k,
                                                   std::uint64_t q) {
  constexpr std::size_t kArcCap = 4096;
  const std::uint64_t t = q / 4;
  const std::uint64_t w = 2 * t + 1;  // window width, <= q for all q >= 2

  // Arcs are closed integer ranges [lo, hi] within [0, q); a window that
  // wraps past q-1 is stored as two plain ranges.
  using Arc = std::pair<std::uint64_t, std::uint64_t>;
  std::vector<Arc> arcs, next;
  {
    const std::uint64_t a0 = sub_mod(digits[0], t, q);
    if (a0 + w - 1 <= q - 1) {
      arcs.emplace_back(a0, a0 + w - 1);
    } else {
      arcs.emplace_back(0, a0 + w - 1 - q);
      arcs.emplace_back(a0, q - 1);
    }
  }

  for (unsigned j = 1; j < k && !arcs.empty(); ++j) {
    const std::uint64_t a_lo = sub_mod(digits[j], t, q);
    next.clear();
    std::size_t tiles = 0;
    for (const Arc& arc : arcs) {
      // Image of the arc under s -> s*2^j, as plain integers.
      const i128 lo_abs = static_cast<i128>(arc.first) << j;
      const i128 hi_abs = static_cast<i128>(arc.second) << j;
      // Window occurrences are [a_lo + m*q, a_lo + w - 1 + m*q]; walk the
      // tiles m that can overlap [lo_abs, hi_abs].
      const i128 qi = static_cast<i128>(q);
      i128 m = (lo_abs - static_cast<i128>(a_lo + w - 1)) / qi;
      while (m * qi + static_cast<i128>(a_lo + w - 1) < lo_abs) ++m;
      const i128 d2 = static_cast<i128>(1) << j;
      for (; m * qi + static_cast<i128>(a_lo) <= hi_abs; ++m) {
        if (++tiles > 4 * kArcCap) return std::nullopt;
        const i128 win_lo = static_cast<i128>(a_lo) + m * qi;
        const i128 win_hi = win_lo + static_cast<i128>(w - 1);
        // Back to s-units: ceil(win_lo / 2^j) .. floor(win_hi / 2^j).
        const i128 s_lo_raw = (win_lo + d2 - 1) >> j;
        const i128 s_hi_raw = win_hi >> j;
        const std::uint64_t s_lo =
            s_lo_raw > static_cast<i128>(arc.first)
                ? static_cast<std::uint64_t>(s_lo_raw)
                : arc.first;
        const std::uint64_t s_hi =
            s_hi_raw < static_cast<i128>(arc.second)
                ? static_cast<std::uint64_t>(s_hi_raw)
                : arc.second;
        if (s_lo > s_hi) continue;
        if (next.size() >= kArcCap) return std::nullopt;
        next.emplace_back(s_lo, s_hi);
      }
    }
    arcs.swap(next);
  }

  // Surviving arcs hold every s consistent with all k windows; verify and
  // return the smallest (the check is belt-and-braces, the arcs are exact).
  std::size_t candidates = 0;
  for (const Arc& arc : arcs) {
    for (std::uint64_t s = arc.first; s <= arc.second; ++s) {
      if (++candidates > 4 * kArcCap) return std::nullopt;
      std::uint64_t pw = 1 % q;
      bool ok = true;
      for (unsigned j = 0; j < k && ok; ++j) {
        const std::int64_t e = center_mod(
            sub_mod(digits[j], mul_mod(s, pw, q), q), q);
        const i128 e4 = 4 * static_cast<i128>(e);
        ok = e4 >= -static_cast<i128>(q) && e4 < static_cast<i128>(q);
        pw = add_mod(pw, pw, q);
      }
      if (ok) return s;
    }
  }
  return std::nullopt;
}

void block_decode_ld(std::vector<i128>& t128, std::uint64_t q) {
  const unsigned k = static_cast<unsigned>(t128.size());
  std::vector<long double> t(k);
  for (unsigned j = 0; j < k; ++j) t[j] = static_cast<long double>(t128[j]);
  const long double qd = static_cast<long double>(q);
  for (unsigned i = 0; i + 1 < k; ++i) {
    long double acc = 0.0L;  // sum of t_j 2^(j-i) over j <= i
    for (unsigned j = 0; j <= i; ++j) acc = acc * 0.5L + t[j];
    // <t, st_i> = 1.5*acc/(1-4^-(i+1)) - t[i+1]
    const long double scale =
        1.0L - std::pow(0.25L, static_cast<long double>(i + 1));
    const long double inner = 1.5L * acc / scale - t[i + 1];
    const long double c = std::floor(inner / qd + 0.5L);
    if (c != 0.0L) {
      const long double high = static_cast<long double>(q >> (i + 1));
      const long double low =
          static_cast<long double>(q & ((1ull << (i + 1)) - 1));
      long double p2 = 1.0L;
      for (unsigned j = 0; j <= i; ++j, p2 *= 2.0L) t[j] -= c * high * p2;
      p2 = 1.0L;
      for (unsigned j = i + 1; j < k; ++j, p2 *= 2.0L) t[j] += c * low * p2;
    }
  }
  long double tg = 0.0L, p2 = 1.0L;
  for (unsigned j = 0; j < k; ++j, p2 *= 2.0L) tg += t[j] * p2;
  const long double gg = std::ldexp(1.0L, 2 * static_cast<int>(k)) - 1.0L;
  const long double c = std::floor(3.0L * tg / gg + 0.5L);
  if (c != 0.0L) {
    p2 = 1.0L;
    for (unsigned j = 0; j < k; ++j, p2 *= 2.0L) t[j] -= c * p2;
  }
  for (unsigned j = 0; j < k; ++j)
    t128[j] = static_cast<i128>(std::llroundl(t[j]));
}

}  // namespace

TrapPair gen_trapdoor(const ParamSet& ps, const ZqMatrix& a_bar,
                      const ZqMatrix& tag, Rng& rng) {
  const std::size_t n = ps.n;
  const std::size_t nk = ps.nk();
  if (a_bar.rows != n || a_bar.cols != ps.mbar || a_bar.q != ps.q)
    throw std::invalid_argument("gen_trapdoor: a_bar shape/modulus mismatch");
  if (tag.rows != n || tag.cols != n || tag.q != ps.q)
    throw std::invalid_argument("gen_trapdoor: tag shape/modulus mismatch");
  if (!is_zero_matrix(tag) && det_mod(tag) == 0)
    throw std::invalid_argument("gen_trapdoor: singular nonzero tag");

  IntMatrix r = sample_mat(ps.mbar, nk, ps.r, rng);
  ZqMatrix ar = mat_mul_int(a_bar, r);  // n x nk

  ZqMatrix a(ps.q, n, ps.m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < ps.mbar; ++j) a.at(i, j) = a_bar.at(i, j);
    // Right block: tag*G - a_bar*R, with (tag*G)[i, c*k+j] = tag[i,c]*2^j.
    for (std::size_t c = 0; c < n; ++c) {
      std::uint64_t v = tag.at(i, c);
      for (unsigned j = 0; j < ps.k; ++j) {
        std::size_t col = c * ps.k + j;
        a.at(i, ps.mbar + col) = sub_mod(v, ar.at(i, col), ps.q);
        v = add_mod(v, v, ps.q);
      }
    }
  }
  return TrapPair{std::move(a), GTrapdoor{std::move(r), tag}};
}

std::optional<GInverse> invert_g(const ZqVector& b_prime, std::size_t n,
                                 unsigned k) {
  if (k == 0 || k > 63 || b_prime.size() != n * k)
    throw std::invalid_argument("invert_g: shape mismatch");
  const std::uint64_t q = b_prime.q;

  GInverse out{ZqVector(q, n), IntVector(n * k)};
  std::vector<i128> t(k);
  for (std::size_t blk = 0; blk < n; ++blk) {
    const std::uint64_t* digits = b_prime.v.data() + blk * k;

    // Validates the candidate noise in t: range check (e_j in [-q/4, q/4)
    // iff 4*e_j in [-q, q)) then an exact reconstruction check in Z_q that
    // guards every arithmetic path.  Returns the recovered block value.
    auto accept = [&]() -> std::optional<std::uint64_t> {
      for (unsigned j = 0; j < k; ++j) {
        const i128 e4 = 4 * t[j];
        if (e4 < -static_cast<i128>(q) || e4 >= static_cast<i128>(q))
          return std::nullopt;
      }
      const std::uint64_t s = sub_mod(
          digits[0], lift_mod(static_cast<std::int64_t>(t[0]), q), q);
      std::uint64_t pw = 1 % q;
      for (unsigned j = 0; j < k; ++j) {
        const std::uint64_t want = add_mod(
            mul_mod(s, pw, q),
            lift_mod(static_cast<std::int64_t>(t[j]), q), q);
        if (want != digits[j]) return std::nullopt;
        pw = add_mod(pw, pw, q);
      }
      return s;
    };

    for (unsigned j = 0; j < k; ++j) t[j] = center_mod(digits[j], q);
    bool done = k <= kExactDigitMax && block_decode_exact(t, q);
    if (!done) {
      for (unsigned j = 0; j < k; ++j) t[j] = center_mod(digits[j], q);
      block_decode_ld(t, q);
    }
    std::optional<std::uint64_t> s = accept();
    if (!s) {
      // Nearest-plane missed or the noise is out of range; the exhaustive
      // window decoder settles which, succeeding iff a valid decomposition
      // exists at all.
      s = block_decode_complete(digits, k, q);
      if (!s) return std::nullopt;
      std::uint64_t pw = 1 % q;
      for (unsigned j = 0; j < k; ++j) {
        t[j] = center_mod(sub_mod(digits[j], mul_mod(*s, pw, q), q), q);
        pw = add_mod(pw, pw, q);
      }
      s = accept();
      if (!s) return std::nullopt;
    }
    out.s[blk] = *s;
    for (unsigned j = 0; j < k; ++j)
      out.e[blk * k + j] = static_cast<std::int64_t>(t[j]);
  }
  return out;
}

std::optional<LweInverse> invert_lwe(const GTrapdoor& td,
                                     const ZqMatrix& a_mat, const ZqVector& b,
                                     const ParamSet& ps) {
  if (b.size() != ps.m || a_mat.cols != ps.m || a_mat.rows != ps.n)
    throw std::invalid_argument("invert_lwe: shape mismatch");
  if (is_zero_matrix(td.tag) || det_mod(td.tag) == 0)
    throw std::invalid_argument("invert_lwe: singular tag");

  // b^t [R; I] = (top block through R) + bottom block.
  ZqVector b_top(ps.q, ps.mbar);
  ZqVector b_bot(ps.q, ps.nk());
  for (std::size_t i = 0; i < ps.mbar; ++i) b_top[i] = b[i];
  for (std::size_t i = 0; i < ps.nk(); ++i) b_bot[i] = b[ps.mbar + i];
  ZqVector b_prime = add(tvec_int(td.r_mat, b_top), b_bot);

  auto g_inv = invert_g(b_prime, ps.n, ps.k);
  if (!g_inv) return std::nullopt;

  // The gadget syndrome is H^t s, so s = (H^t)^{-1} * recovered.
  ZqMatrix ht_inv = inv_matrix(transpose(td.tag));
  ZqVector s = mat_vec(ht_inv, g_inv->s);
  IntVector e = center_vec(sub(b, mat_tvec(a_mat, s)));
  return LweInverse{std::move(s), std::move(e)};
}

IntVector sample_g(const ZqVector& v, unsigned k, double width, Rng& rng) {
  if (k == 0 || k > 63) throw std::invalid_argument("sample_g: bad k");
  const std::size_t n = v.size();
  if (n == 0) return IntVector(0);
  const double floor_width = std::sqrt(5.0) * smoothing_r(n);
  if (width + 1e-9 < floor_width)
    throw std::invalid_argument("sample_g: width below G-lattice floor");
  const std::uint64_t q = v.q;

  // Per-step Gram-Schmidt norms of the kernel basis (see header comment).
  std::vector<double> chain_norm(k >= 1 ? k - 1 : 0);
  for (unsigned i = 0; i + 1 < k; ++i) {
    const double num = std::pow(4.0, i + 2.0) - 1.0;
    const double den = std::pow(4.0, i + 1.0) - 1.0;
    chain_norm[i] = std::sqrt(num / den);
  }
  const double gg = std::ldexp(1.0, 2 * static_cast<int>(k)) - 1.0;  // 3|g|^2
  const double last_norm = std::sqrt(3.0 * static_cast<double>(q) *
                                     static_cast<double>(q) / gg);

  IntVector out(n * k);
  std::vector<double> t(k);
  for (std::size_t blk = 0; blk < n; ++blk) {
    std::uint64_t val = v[blk];
    for (unsigned j = 0; j < k; ++j) t[j] = static_cast<double>((val >> j) & 1);

    // Step k-1 first: subtract a multiple of the q-digits column.
    {
      double tg = 0.0;
      for (unsigned j = k; j-- > 0;) tg = tg * 2.0 + t[j];
      const std::int64_t z =
          sample_z(tg / static_cast<double>(q), width / last_norm, rng);
      if (z != 0) {
        std::uint64_t qq = q;
        for (unsigned j = 0; j < k; ++j, qq >>= 1)
          t[j] -= static_cast<double>(z) * static_cast<double>(qq & 1);
      }
    }
    for (unsigned i = k - 1; i-- > 0;) {
      double acc = 0.0;  // sum of t_j 2^(j-i) for j <= i
      for (unsigned j = 0; j <= i; ++j) acc = acc * 0.5 + t[j];
      const double scale = 1.0 - std::pow(0.25, i + 1.0);
      const double inner = 1.5 * acc / scale - t[i + 1];
      const double norm2 = chain_norm[i] * chain_norm[i];
      const std::int64_t z =
          sample_z(inner / norm2, width / chain_norm[i], rng);
      if (z != 0) {
        t[i] -= 2.0 * static_cast<double>(z);
        t[i + 1] += static_cast<double>(z);
      }
    }
    for (unsigned j = 0; j < k; ++j)
      out[blk * k + j] = static_cast<std::int64_t>(std::llround(t[j]));
  }
  return out;
}

struct PreimageSampler::Impl {
  ParamSet ps;
  IntMatrix r_mat;
  double s_width = 0.0;
  double w_width = 0.0;   // gadget stage width, sqrt(5)*r
  double round_w = 0.0;   // randomized-rounding width, r
  double sigma2 = 0.0;    // std of the lower perturbation block
  Eigen::MatrixXd r_d;    // R as doubles
  Eigen::MatrixXd chol_l;  // lower factor of the upper-block covariance
};

PreimageSampler::PreimageSampler(const ParamSet& ps, const IntMatrix& r_mat,
                                 double s_width) {
  const std::size_t nk = ps.nk();
  if (r_mat.rows != ps.mbar || r_mat.cols != nk)
    throw std::invalid_argument("PreimageSampler: trapdoor shape mismatch");
  const double floor_width = preimage_width(ps.mbar, nk, ps.r, 0);
  if (s_width + 1e-9 < floor_width)
    throw std::invalid_argument("PreimageSampler: width below floor");

  auto impl = std::make_shared<Impl>();
  impl->ps = ps;
  impl->r_mat = r_mat;
  impl->s_width = s_width;
  impl->w_width = std::sqrt(5.0) * ps.r;
  impl->round_w = ps.r;
  const double s2 = s_width * s_width;
  const double w2 = impl->w_width * impl->w_width;
  const double r2 = impl->round_w * impl->round_w;
  const double var2 = s2 - w2 - r2;
  if (var2 <= 0.0)
    throw std::domain_error("PreimageSampler: covariance not positive");
  impl->sigma2 = std::sqrt(var2);

  impl->r_d.resize(static_cast<Eigen::Index>(ps.mbar),
                   static_cast<Eigen::Index>(nk));
  for (std::size_t i = 0; i < ps.mbar; ++i)
    for (std::size_t j = 0; j < nk; ++j)
      impl->r_d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(r_mat.at(i, j));

  // Upper-block covariance: (s^2-r^2) I - w^2 (s^2-r^2)/sigma2^2 * R R^t.
  const double coef = w2 * (s2 - r2) / var2;
  Eigen::MatrixXd cov =
      -coef * (impl->r_d * impl->r_d.transpose());
  cov.diagonal().array() += s2 - r2;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("PreimageSampler: covariance not positive definite");
  impl->chol_l = llt.matrixL();
  if (impl->chol_l.diagonal().minCoeff() < 1e-9)
    throw std::domain_error("PreimageSampler: covariance pivot underflow");
  impl_ = std::move(impl);
}

double PreimageSampler::width() const { return impl_->s_width; }

IntVector PreimageSampler::sample(const ZqMatrix& a_mat, const ZqMatrix& tag,
                                  const ZqVector& u, Rng& rng) const {
  const Impl& im = *impl_;
  const ParamSet& ps = im.ps;
  const std::size_t nk = ps.nk();
  if (a_mat.rows != ps.n || a_mat.cols != ps.m || u.size() != ps.n)
    throw std::invalid_argument("PreimageSampler: shape mismatch");

  // Perturbation: y2 ~ N(0, sigma2^2 I), y1 = -(w^2/sigma2^2) R y2 + L eta.
  // sigma2 and L are kept in width units (exp(-pi x^2 / s^2) convention),
  // so continuous draws scale by 1/sqrt(2 pi) to convert width to std dev.
  const double unit = 1.0 / std::sqrt(2.0 * 3.14159265358979323846);
  Eigen::VectorXd y2(static_cast<Eigen::Index>(nk));
  for (std::size_t i = 0; i < nk; ++i)
    y2(static_cast<Eigen::Index>(i)) = im.sigma2 * unit * rng.next_normal();
  Eigen::VectorXd eta(static_cast<Eigen::Index>(ps.mbar));
  for (std::size_t i = 0; i < ps.mbar; ++i)
    eta(static_cast<Eigen::Index>(i)) = unit * rng.next_normal();
  const double w2 = im.w_width * im.w_width;
  Eigen::VectorXd y1 = -(w2 / (im.sigma2 * im.sigma2)) * (im.r_d * y2) +
                       im.chol_l.triangularView<Eigen::Lower>() * eta;

  IntVector p(ps.m);
  for (std::size_t i = 0; i < ps.mbar; ++i)
    p[i] = sample_z(y1(static_cast<Eigen::Index>(i)), im.round_w, rng);
  for (std::size_t i = 0; i < nk; ++i)
    p[ps.mbar + i] =
        sample_z(y2(static_cast<Eigen::Index>(i)), im.round_w, rng);

  // Gadget stage on the tag-corrected syndrome.
  ZqVector v = mat_vec(inv_matrix(tag), sub(u, mat_vec_int(a_mat, p)));
  IntVector z = sample_g(v, ps.k, im.w_width, rng);

  IntVector x(ps.m);
  for (std::size_t i = 0; i < ps.mbar; ++i) {
    std::int64_t acc = p[i];
    const std::int64_t* rrow = im.r_mat.row(i);
    for (std::size_t j = 0; j < nk; ++j) acc += rrow[j] * z[j];
    x[i] = acc;
  }
  for (std::size_t i = 0; i < nk; ++i) x[ps.mbar + i] = p[ps.mbar + i] + z[i];
  return x;
}

IntVector sample_pre(const GTrapdoor& td, const ZqMatrix& a_mat,
                     const ZqVector& u, double s_width, const ParamSet& ps,
                     Rng& rng) {
  if (is_zero_matrix(td.tag) || det_mod(td.tag) == 0)
    throw std::invalid_argument("sample_pre: singular tag");
  return PreimageSampler(ps, td.r_mat, s_width)
      .sample(a_mat, td.tag, u, rng);
}

}  // namespace ibpre
