// params.cpp - derivation searches the modulus bit-length upward; for each
// candidate k the dimensions and error bounds are fixed numbers, so the
// smallest admissible prime in (2^(k-1), 2^k) decides immediately whether
// the band works.

#include "ibpre/params.hpp"

#include <cmath>
#include <stdexcept>

#include "ibpre/frd.hpp"
#include "ibpre/zq.hpp"

namespace ibpre {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2 = 0.69314718055994530942;
constexpr int kEpsBits = 36;  // smoothing quality eps = 2^-36

double s1_trapdoor(std::size_t mbar, std::size_t nk, double r) {
  return 1.1 * (std::sqrt(static_cast<double>(mbar)) +
                std::sqrt(static_cast<double>(nk))) *
         r;
}

struct Bounds {
  double b_fresh;
  double b_reenc;
};

Bounds error_bounds(std::size_t mbar, std::size_t nk, unsigned k, double r,
                    double alpha_q) {
  double m = static_cast<double>(mbar + nk);
  double s1r = s1_trapdoor(mbar, nk, r);
  double x_norm = 2.0 * std::sqrt(6.0) * std::sqrt(m) *
                  std::sqrt(s1r * s1r + 1.0) * r;
  double e_norm = 2.0 * alpha_q *
                  std::sqrt(2.0 * static_cast<double>(mbar) *
                            static_cast<double>(nk)) *
                  r;
  double b_fresh = 6.0 * alpha_q + x_norm * e_norm;
  double r2_term = 1.1 * m * static_cast<double>(k) * r;
  return {b_fresh, b_fresh + r2_term};
}

}  // namespace

double smoothing_r(std::size_t n) {
  if (n == 0) throw std::invalid_argument("smoothing_r: n must be positive");
  return std::sqrt((std::log(2.0 * static_cast<double>(n)) +
                    kEpsBits * kLog2) /
                   kPi);
}

double alpha_q_target(std::size_t n) {
  return std::max(4.0, 2.0 * std::sqrt(static_cast<double>(n)));
}

double preimage_width(std::size_t mbar, std::size_t nk, double r,
                      std::size_t l) {
  double s1 = s1_trapdoor(mbar, nk, r);
  if (l > 0) s1 *= std::sqrt(static_cast<double>(l));
  return std::sqrt(5.0) * r * std::sqrt(s1 * s1 + 1.0);
}

void recompute_reals(ParamSet& ps) {
  ps.r = smoothing_r(ps.n);
  ps.alpha = alpha_q_target(ps.n) / static_cast<double>(ps.q);
  ps.s = preimage_width(ps.mbar, ps.nk(), ps.r, ps.l);
}

BudgetReport validate(const ParamSet& ps) {
  BudgetReport rep;
  double aq = ps.alpha_q();
  rep.alpha_degenerate = aq < 1.0;

  Bounds b = error_bounds(ps.mbar, ps.nk(), ps.k, ps.r, aq);
  rep.b_fresh = b.b_fresh;
  rep.b_reenc = b.b_reenc;
  double quarter = static_cast<double>(ps.q) / 4.0;
  rep.ratio_fresh = rep.b_fresh / quarter;
  rep.ratio_reenc = rep.b_reenc / quarter;

  bool ok = ps.n >= 1 && ps.k >= 1 && is_prime_u64(ps.q);
  // k = ceil(log2 q): q must sit in (2^(k-1), 2^k].
  if (ok && ps.k < 64) ok = ps.q <= (1ull << ps.k);
  if (ok && ps.k >= 2) ok = ps.q > (1ull << (ps.k - 1));
  ok = ok && ps.mbar >= 2 * ps.nk() && ps.m == ps.mbar + ps.nk();
  // LWE rate invariant: 1/alpha >= (nk)^2 * r^2.
  double nk = static_cast<double>(ps.nk());
  ok = ok && ps.alpha > 0.0 &&
       ps.alpha * nk * nk * ps.r * ps.r <= 1.0 + 1e-9;
  ok = ok && ps.frd_poly.size() == ps.n + 1 && ps.frd_poly.back() == 1 &&
       poly_is_irreducible(ps.frd_poly, ps.q);
  rep.structure_ok = ok;
  return rep;
}

namespace detail {

ParamSet derive_custom(std::size_t n, std::size_t l, double safety_margin) {
  if (n < 2) throw std::invalid_argument("derive: n must be at least 2");
  if (safety_margin < 1.0)
    throw std::invalid_argument("derive: safety margin below 1");

  double r = smoothing_r(n);
  double aq = alpha_q_target(n);

  for (unsigned k = 2; k <= 63; ++k) {
    std::size_t nk = n * static_cast<std::size_t>(k);
    std::size_t mbar = 2 * nk;
    Bounds b = error_bounds(mbar, nk, k, r, aq);

    double need = 4.0 * safety_margin * b.b_reenc;
    double rate_floor = aq * static_cast<double>(nk) *
                        static_cast<double>(nk) * r * r;
    need = std::max(need, rate_floor);

    std::uint64_t band_lo = (1ull << (k - 1)) + 1;
    std::uint64_t band_hi = (1ull << k) - 1;
    if (need > static_cast<double>(band_hi)) continue;

    std::uint64_t q_min = band_lo;
    if (need > static_cast<double>(band_lo))
      q_min = static_cast<std::uint64_t>(std::ceil(need));
    std::uint64_t q = next_prime(q_min);
    if (q > band_hi) continue;

    ParamSet ps;
    ps.n = n;
    ps.q = q;
    ps.k = k;
    ps.mbar = mbar;
    ps.m = mbar + nk;
    ps.l = l;
    recompute_reals(ps);
    ps.frd_poly = find_frd_poly(n, q);
    return ps;
  }
  throw std::runtime_error("derive: no admissible prime q below 2^64");
}

}  // namespace detail

ParamSet derive(std::size_t n, std::size_t l, double safety_margin) {
  if (n < 16) throw std::invalid_argument("derive: n must be at least 16");
  return detail::derive_custom(n, l, safety_margin);
}

}  // namespace ibpre
