// gaussian.hpp - discrete Gaussian sampling over Z, vectors, and matrices.
//
// sample_z draws from D_{Z,c,s}, the integer Gaussian with density
// proportional to exp(-pi*(x-c)^2/s^2), truncated to |x - c| <= 6s.  Under
// this convention the standard deviation is s/sqrt(2*pi).  All randomness
// comes from the caller's Rng, so fixed seeds give bit-exact streams.

#pragma once

#include <cstdint>

#include "ibpre/rng.hpp"
#include "ibpre/zq.hpp"

namespace ibpre {

// One draw from D_{Z,c,s} (tail-cut).  Width s must be positive; throws
// std::domain_error if the truncated support contains no integer (possible
// only when 6s < 1/2 at a fractional center).
std::int64_t sample_z(double c, double s, Rng& rng);

// dim i.i.d. draws from D_{Z,0,s}; dim = 0 yields an empty vector.
IntVector sample_vec(std::size_t dim, double s, Rng& rng);

// rows x cols i.i.d. draws from D_{Z,0,s}; zero dimensions are an error.
IntMatrix sample_mat(std::size_t rows, std::size_t cols, double s, Rng& rng);

}  // namespace ibpre
