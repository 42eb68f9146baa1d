// trapdoor.hpp - gadget trapdoors and their two oracles: LWE inversion and
// Gaussian preimage sampling.
//
// A trapdoor for A = [A_bar | -A_bar*R + H*G] is the short matrix R together
// with the tag H, satisfying A * [R; I] = H * G mod q.  H = 0 labels public
// parameters; any invertible H (identity-encoding output or I) enables the
// oracles.

#pragma once

#include <memory>
#include <optional>

#include "ibpre/params.hpp"
#include "ibpre/rng.hpp"
#include "ibpre/zq.hpp"

namespace ibpre {

struct GTrapdoor {
  IntMatrix r_mat;  // mbar x nk, entries at width r
  ZqMatrix tag;     // n x n, zero or invertible
};

struct TrapPair {
  ZqMatrix a_mat;  // n x m
  GTrapdoor trapdoor;
};

// Builds A = [a_bar | -a_bar*R + tag*G] with fresh R from D_{Z,r}^(mbar x nk).
// The tag must be the zero matrix or invertible mod q.
TrapPair gen_trapdoor(const ParamSet& ps, const ZqMatrix& a_bar,
                      const ZqMatrix& tag, Rng& rng);

struct GInverse {
  ZqVector s;  // length n
  IntVector e;  // length nk, centered
};

// Solves b_prime = G^t s + e mod q blockwise: a nearest-plane pass against
// the dual of the gadget-kernel basis handles typical noise, and an exact
// interval-intersection fallback covers the corners it misses, so a result
// is returned whenever a decomposition with every e_j in [-q/4, q/4)
// exists.  Returns nullopt only when no in-range solution exists (decode
// failure is a signal, never silent corruption).  Near the range boundary
// several decompositions can satisfy the bound; the returned one is
// deterministic and always satisfies the equation and the bound.
std::optional<GInverse> invert_g(const ZqVector& b_prime, std::size_t n,
                                 unsigned k);

struct LweInverse {
  ZqVector s;  // length n
  IntVector e;  // length m, centered
};

// Recovers (s, e) from b = A^t s + e using the trapdoor: b^t [R; I] reduces
// to a gadget instance with syndrome H^t s.  Throws on a singular tag;
// returns nullopt on decode failure.
std::optional<LweInverse> invert_lwe(const GTrapdoor& td, const ZqMatrix& a_mat,
                                     const ZqVector& b, const ParamSet& ps);

// Samples z ~ D_{Lambda_v_perp(G), width} with G*z = v mod q exact, one
// k-digit block per coordinate of v (randomized nearest-plane over the
// kernel basis).  Requires width >= sqrt(5) * smoothing_r(v.size()).
IntVector sample_g(const ZqVector& v, unsigned k, double width, Rng& rng);

// Preimage sampler for a fixed trapdoor matrix R: the expensive covariance
// factorization runs once in the constructor, after which sample() serves
// any (a_mat, tag, u) built over the same R.  Copyable (shared immutable
// state).
class PreimageSampler {
 public:
  // Throws std::invalid_argument when s_width is below the design floor
  // sqrt(5)*r*sqrt(s1^2+1), and std::domain_error when the perturbation
  // covariance s^2 I - w^2 [R;I][R;I]^t - r^2 I is not safely positive
  // definite (factorization pivot below 1e-9).
  PreimageSampler(const ParamSet& ps, const IntMatrix& r_mat, double s_width);

  // a_mat must satisfy a_mat * [R; I] = tag * G with an invertible tag.
  // Output x obeys a_mat * x = u mod q exactly, by construction.
  IntVector sample(const ZqMatrix& a_mat, const ZqMatrix& tag,
                   const ZqVector& u, Rng& rng) const;

  double width() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// One-shot convenience wrapper over PreimageSampler.
IntVector sample_pre(const GTrapdoor& td, const ZqMatrix& a_mat,
                     const ZqVector& u, double s_width, const ParamSet& ps,
                     Rng& rng);

}  // namespace ibpre
