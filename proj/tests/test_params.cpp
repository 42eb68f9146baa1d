// Parameter derivation: frozen expected values for the shipped dimension
// choices, structural invariants of the derived sets, budget-report
// monotonicity in the safety margin, and validator behavior on corrupted
// sets.  The frozen numbers were produced by this derivation and checked
// for primality and band placement independently.

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ibpre/frd.hpp"
#include "ibpre/params.hpp"
#include "ibpre/zq.hpp"

using namespace ibpre;

namespace {

// ceil(log2 q) for q >= 2.
unsigned bits_of(std::uint64_t q) {
  unsigned k = 0;
  while ((q - 1) >> k) ++k;
  return k;
}

void check_structure(const ParamSet& ps, std::size_t n, std::size_t l) {
  CHECK(ps.n == n);
  CHECK(ps.l == l);
  CHECK(is_prime_u64(ps.q));
  CHECK(ps.k == bits_of(ps.q));
  CHECK(ps.mbar == 2 * ps.nk());
  CHECK(ps.m == ps.mbar + ps.nk());
  REQUIRE(ps.frd_poly.size() == n + 1);
  CHECK(ps.frd_poly[n] == 1);
  CHECK(poly_is_irreducible(ps.frd_poly, ps.q));
  CHECK(ps.alpha_q() == doctest::Approx(alpha_q_target(n)));
  CHECK(ps.r == doctest::Approx(smoothing_r(n)));
  CHECK(ps.s ==
        doctest::Approx(preimage_width(ps.mbar, ps.nk(), ps.r, ps.l)));
  BudgetReport rep = validate(ps);
  CHECK(rep.structure_ok);
  CHECK(rep.valid());
}

}  // namespace

TEST_CASE("smoothing width follows the pinned closed form") {
  // sqrt((ln(2n) + 36 ln 2) / pi), hand-evaluated.
  CHECK(smoothing_r(32) == doctest::Approx(3.0441247).epsilon(1e-5));
  CHECK(smoothing_r(64) == doctest::Approx(3.0801511).epsilon(1e-5));
  CHECK(smoothing_r(2) < smoothing_r(16));
  CHECK(smoothing_r(16) < smoothing_r(4096));
  CHECK_THROWS_AS(smoothing_r(0), std::invalid_argument);
}

TEST_CASE("noise width target has the 4 floor and sqrt growth") {
  CHECK(alpha_q_target(1) == doctest::Approx(4.0));
  CHECK(alpha_q_target(4) == doctest::Approx(4.0));
  CHECK(alpha_q_target(16) == doctest::Approx(8.0));
  CHECK(alpha_q_target(32) == doctest::Approx(2.0 * std::sqrt(32.0)));
  CHECK(alpha_q_target(64) == doctest::Approx(16.0));
}

TEST_CASE("preimage width floor scales with the identity bit count") {
  const double r = smoothing_r(32);
  double base = preimage_width(2496, 1248, r, 0);
  CHECK(base == doctest::Approx(1944.0).epsilon(2e-3));
  // With l > 0 the trapdoor aggregates l blocks, inflating the singular
  // value estimate by sqrt(l).
  double with_l = preimage_width(2496, 1248, r, 32);
  CHECK(with_l == doctest::Approx(10996.7).epsilon(2e-3));
  CHECK(with_l > base);
  double s1 = 1.1 * (std::sqrt(2496.0) + std::sqrt(1248.0)) * r;
  CHECK(base ==
        doctest::Approx(std::sqrt(5.0) * r * std::sqrt(s1 * s1 + 1.0)));
}

TEST_CASE("frozen derivation at the shipped dimension") {
  ParamSet ps = derive(32, 0, 2.0);
  check_structure(ps, 32, 0);
  CHECK(ps.q == 358437527677ull);
  CHECK(ps.k == 39);
  CHECK(ps.mbar == 2496);
  CHECK(ps.m == 3744);
  BudgetReport rep = validate(ps);
  // margin = 2 targets a re-encryption ratio of one half.
  CHECK(rep.ratio_reenc == doctest::Approx(0.5).epsilon(0.02));
  CHECK(rep.ratio_fresh <= rep.ratio_reenc);
  CHECK(rep.b_fresh <= rep.b_reenc);
  CHECK_FALSE(rep.alpha_degenerate);
}

TEST_CASE("frozen derivation for the adaptive variant keeps the modulus") {
  ParamSet ps = derive(32, 32, 2.0);
  check_structure(ps, 32, 32);
  // The identity bit count only widens the preimage sampler; the noise
  // budget chain and hence the modulus are unchanged.
  CHECK(ps.q == 358437527677ull);
  CHECK(ps.k == 39);
  CHECK(ps.mbar == 2496);
  CHECK(ps.s == doctest::Approx(10996.7).epsilon(2e-3));
  CHECK(ps.s > derive(32, 0, 2.0).s);
}

TEST_CASE("frozen small fixtures used across the test suite") {
  ParamSet p4 = detail::derive_custom(4, 0, 2.0);
  check_structure(p4, 4, 0);
  CHECK(p4.q == 1048727699ull);
  CHECK(p4.k == 30);
  CHECK(p4.m == 360);

  ParamSet p4a = detail::derive_custom(4, 4, 2.0);
  check_structure(p4a, 4, 4);
  CHECK(p4a.q == 1048727699ull);
  CHECK(p4a.m == 360);

  ParamSet p2 = detail::derive_custom(2, 0, 2.0);
  check_structure(p2, 2, 0);
  CHECK(p2.q == 219741637ull);
  CHECK(p2.k == 28);
  CHECK(p2.m == 168);

  ParamSet p8 = detail::derive_custom(8, 0, 2.0);
  check_structure(p8, 8, 0);
  CHECK(p8.q == 7454591497ull);
  CHECK(p8.k == 33);
}

TEST_CASE("dimension floors are enforced") {
  CHECK_THROWS_AS(derive(8, 0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(derive(15, 0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(detail::derive_custom(1, 0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(derive(32, 0, 0.5), std::invalid_argument);
  CHECK_NOTHROW(derive(16, 0, 1.0));
}

TEST_CASE("larger safety margins buy proportionally smaller ratios") {
  ParamSet a = derive(16, 0, 2.0);
  ParamSet b = derive(16, 0, 4.0);
  CHECK(a.q == 52074890171ull);  // frozen n = 16 derivation
  CHECK(b.q >= a.q);
  double ra = validate(a).ratio_reenc;
  double rb = validate(b).ratio_reenc;
  CHECK(ra == doctest::Approx(0.5).epsilon(0.02));
  // Band clamping can only push the ratio further down.
  CHECK(rb <= 0.26);
  CHECK(rb >= 0.1);
}

TEST_CASE("recompute_reals restores the real-valued fields exactly") {
  ParamSet ps = detail::derive_custom(4, 4, 2.0);
  ParamSet wiped = ps;
  wiped.alpha = 0.0;
  wiped.r = 0.0;
  wiped.s = 0.0;
  recompute_reals(wiped);
  CHECK(wiped.alpha == doctest::Approx(ps.alpha).epsilon(1e-12));
  CHECK(wiped.r == doctest::Approx(ps.r).epsilon(1e-12));
  CHECK(wiped.s == doctest::Approx(ps.s).epsilon(1e-12));
}

TEST_CASE("validate reports structural defects without throwing") {
  ParamSet good = detail::derive_custom(4, 0, 2.0);
  REQUIRE(validate(good).valid());

  ParamSet bad = good;
  bad.q = good.q + 1;  // even, not prime
  CHECK_FALSE(validate(bad).structure_ok);

  bad = good;
  bad.k = good.k + 1;  // q no longer in the k-band
  CHECK_FALSE(validate(bad).structure_ok);

  bad = good;
  bad.mbar = good.mbar - 1;  // below the 2nk floor
  CHECK_FALSE(validate(bad).structure_ok);

  bad = good;
  bad.m = good.m + 1;  // m != mbar + nk
  CHECK_FALSE(validate(bad).structure_ok);

  bad = good;
  bad.frd_poly.pop_back();  // wrong length
  CHECK_FALSE(validate(bad).structure_ok);

  bad = good;
  bad.frd_poly[0] = add_mod(bad.frd_poly[0], 1, bad.q);
  if (poly_is_irreducible(bad.frd_poly, bad.q)) {
    // Shifted constant may stay irreducible; force reducibility instead:
    // x^n is divisible by x.
    for (std::size_t i = 0; i + 1 < bad.frd_poly.size(); ++i)
      bad.frd_poly[i] = 0;
  }
  CHECK_FALSE(validate(bad).structure_ok);

  bad = good;
  bad.alpha = 0.5 / static_cast<double>(bad.q);  // alpha*q = 0.5 < 1
  BudgetReport rep = validate(bad);
  CHECK(rep.alpha_degenerate);
  CHECK_FALSE(rep.valid());

  // A modulus far too small for the noise chain: ratios blow past 1.
  bad = good;
  bad.q = 1048583;  // prime, 21 bits
  bad.k = 21;
  recompute_reals(bad);
  bad.frd_poly = find_frd_poly(bad.n, bad.q);
  rep = validate(bad);
  CHECK(rep.ratio_fresh > 1.0);
  CHECK_FALSE(rep.valid());

  // Purity: identical reports on repeated calls.
  BudgetReport r1 = validate(good);
  BudgetReport r2 = validate(good);
  CHECK(r1.b_fresh == r2.b_fresh);
  CHECK(r1.b_reenc == r2.b_reenc);
  CHECK(r1.ratio_fresh == r2.ratio_fresh);
  CHECK(r1.ratio_reenc == r2.ratio_reenc);
}
