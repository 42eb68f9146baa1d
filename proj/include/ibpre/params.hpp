// params.hpp - parameter-set derivation and noise-budget validation.
//
// A ParamSet fixes everything the schemes need: dimensions, the prime
// modulus, Gaussian widths, and the identity-encoding polynomial.  The
// integer fields are authoritative; the real fields are deterministic
// functions of them and are recomputed after deserialization.

#pragma once

#include <cstdint>
#include <vector>

namespace ibpre {

struct ParamSet {
  std::size_t n = 0;                    // lattice dimension
  std::uint64_t q = 0;                  // prime modulus
  unsigned k = 0;                       // ceil(log2 q)
  std::size_t mbar = 0;                 // uniform block width, 2nk
  std::size_t m = 0;                    // total width, mbar + nk
  std::size_t l = 0;                    // identity bit-length; 0 = selective
  double alpha = 0.0;                   // LWE error rate (alpha*q = width)
  double r = 0.0;                       // smoothing width
  double s = 0.0;                       // preimage sampling width
  std::vector<std::uint64_t> frd_poly;  // modulus f(x), length n + 1

  std::size_t nk() const { return n * static_cast<std::size_t>(k); }
  double alpha_q() const { return alpha * static_cast<double>(q); }
};

// Concrete-constant error bounds, each compared against the q/4 decoding
// radius.  A set is usable only when valid() holds.
struct BudgetReport {
  double b_fresh = 0.0;       // bound on |e - x^t e| for fresh ciphertexts
  double b_reenc = 0.0;       // adds the re-encryption term |r2^t bd(c1)|
  double ratio_fresh = 0.0;   // b_fresh / (q/4)
  double ratio_reenc = 0.0;   // b_reenc / (q/4)
  bool alpha_degenerate = false;  // alpha*q < 1: noise rounds to zero
  bool structure_ok = false;      // primality, dimension and rate invariants

  bool valid() const {
    return structure_ok && !alpha_degenerate && ratio_fresh < 1.0 &&
           ratio_reenc < 1.0;
  }
};

// Smoothing width sqrt(ln(2n/eps)/pi) at eps = 2^-36.
double smoothing_r(std::size_t n);

// Target noise width alpha*q = max(4, 2*sqrt(n)).
double alpha_q_target(std::size_t n);

// Preimage width floor: sqrt(5) * r * sqrt(s1^2 + 1) where s1 estimates the
// top singular value of the trapdoor, 1.1*(sqrt(mbar)+sqrt(nk))*r, scaled by
// sqrt(l) when l > 0 since the tag then sums l width-r blocks.
double preimage_width(std::size_t mbar, std::size_t nk, double r,
                      std::size_t l);

// Recomputes alpha, r, s from the integer fields (used after load).
void recompute_reals(ParamSet& ps);

// Checks the error-bound chain with pinned constants:
//   s1(R) <= 1.1*(sqrt(mbar)+sqrt(nk))*r
//   |x|   <= 2*sqrt(6)*sqrt(m)*sqrt(s1(R)^2+1)*r
//   |e|   <= 2*alpha*q*sqrt(2*mbar*nk)*r
//   |r2^t bd(c1)| <= 1.1*(m*k)*r
// Pure and deterministic; never throws on a bad set, it just reports.
BudgetReport validate(const ParamSet& ps);

// Smallest prime q (scanning k = ceil(log2 q) upward) with
// q >= max(2^(k-1)+1, 4*margin*b_reenc, alpha_q*(nk)^2*r^2), all derived
// fields populated, frd_poly found by deterministic search.
// Requires n >= 16; throws if no q below 2^64 works.
ParamSet derive(std::size_t n, std::size_t l, double safety_margin = 2.0);

namespace detail {

// Same derivation without the n floor, for small test fixtures (n >= 2).
ParamSet derive_custom(std::size_t n, std::size_t l, double safety_margin);

}  // namespace detail

}  // namespace ibpre
