// frd.cpp - polynomial arithmetic over Z_q and the identity encoding.
//
// Irreducibility uses Rabin's criterion: f of degree n is irreducible iff
// x^(q^n) == x mod f and gcd(x^(q^(n/p)) - x, f) = 1 for every prime p | n.
// The powers x^(q^j) are built by repeated q-th powering, so no exponent
// ever exceeds 64 bits.

#include "ibpre/frd.hpp"

#include <stdexcept>

namespace ibpre {

namespace poly {

std::vector<std::uint64_t> trim(std::vector<std::uint64_t> a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

std::vector<std::uint64_t> rem(std::vector<std::uint64_t> a,
                               const std::vector<std::uint64_t>& f,
                               std::uint64_t q) {
  if (f.empty() || f.back() != 1)
    throw std::invalid_argument("poly::rem: modulus must be monic");
  std::size_t deg_f = f.size() - 1;
  while (a.size() > deg_f) {
    std::uint64_t lead = a.back();
    std::size_t shift = a.size() - 1 - deg_f;
    if (lead != 0) {
      for (std::size_t j = 0; j < deg_f; ++j) {
        a[shift + j] = sub_mod(a[shift + j], ibpre::mul_mod(lead, f[j], q), q);
      }
    }
    a.pop_back();
  }
  a.resize(deg_f, 0);
  return a;
}

std::vector<std::uint64_t> mul_mod(const std::vector<std::uint64_t>& a,
                                   const std::vector<std::uint64_t>& b,
                                   const std::vector<std::uint64_t>& f,
                                   std::uint64_t q) {
  if (a.empty() || b.empty()) return std::vector<std::uint64_t>(f.size() - 1, 0);
  std::vector<std::uint64_t> prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = add_mod(prod[i + j], ibpre::mul_mod(a[i], b[j], q), q);
    }
  }
  return rem(std::move(prod), f, q);
}

std::vector<std::uint64_t> pow_mod(std::vector<std::uint64_t> a,
                                   std::uint64_t e,
                                   const std::vector<std::uint64_t>& f,
                                   std::uint64_t q) {
  std::vector<std::uint64_t> acc(f.size() - 1, 0);
  if (!acc.empty()) acc[0] = 1 % q;
  a = rem(std::move(a), f, q);
  while (e != 0) {
    if (e & 1) acc = mul_mod(acc, a, f, q);
    e >>= 1;
    if (e != 0) a = mul_mod(a, a, f, q);
  }
  return acc;
}

std::vector<std::uint64_t> gcd(std::vector<std::uint64_t> a,
                               std::vector<std::uint64_t> b, std::uint64_t q) {
  a = trim(std::move(a));
  b = trim(std::move(b));
  while (!b.empty()) {
    // Make b monic, then the generic remainder applies.
    std::uint64_t scale = inv_mod(b.back(), q);
    for (auto& c : b) c = ibpre::mul_mod(c, scale, q);
    std::vector<std::uint64_t> r = trim(rem(std::move(a), b, q));
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    std::uint64_t scale = inv_mod(a.back(), q);
    for (auto& c : a) c = ibpre::mul_mod(c, scale, q);
  }
  return a;
}

}  // namespace poly

bool poly_is_irreducible(const std::vector<std::uint64_t>& f,
                         std::uint64_t q) {
  std::vector<std::uint64_t> ft = poly::trim(f);
  if (ft.size() < 2 || ft.back() != 1)
    throw std::invalid_argument("poly_is_irreducible: monic f required");
  std::size_t n = ft.size() - 1;
  if (n == 1) return true;

  std::vector<std::size_t> prime_divisors;
  {
    std::size_t rest = n;
    for (std::size_t p = 2; p * p <= rest; ++p) {
      if (rest % p == 0) {
        prime_divisors.push_back(p);
        while (rest % p == 0) rest /= p;
      }
    }
    if (rest > 1) prime_divisors.push_back(rest);
  }

  std::vector<std::uint64_t> x(n, 0);
  if (n >= 2) x[1] = 1;

  // frob = x^(q^j) mod f after j iterations.
  std::vector<std::uint64_t> frob = x;
  for (std::size_t j = 1; j <= n; ++j) {
    frob = poly::pow_mod(std::move(frob), q, ft, q);
    bool is_checkpoint = false;
    for (std::size_t p : prime_divisors) {
      if (n % p == 0 && j == n / p) is_checkpoint = true;
    }
    if (is_checkpoint) {
      std::vector<std::uint64_t> diff = frob;
      diff[1] = sub_mod(diff[1], 1, q);
      std::vector<std::uint64_t> g = poly::gcd(diff, ft, q);
      if (!(g.size() == 1 && g[0] == 1)) return false;
    }
  }
  std::vector<std::uint64_t> diff = frob;
  diff[1] = sub_mod(diff[1], 1, q);
  return poly::trim(diff).empty();
}

std::vector<std::uint64_t> find_frd_poly(std::size_t n, std::uint64_t q) {
  if (n == 0) throw std::invalid_argument("find_frd_poly: n must be positive");
  std::vector<std::uint64_t> f(n + 1, 0);
  f[n] = 1;
  if (n == 1) {
    f[0] = 1;  // x + 1; any monic linear works, pick the smallest.
    return f;
  }
  f[1] = 1;
  for (std::uint64_t c = 1; c < q; ++c) {
    f[0] = c;
    if (poly_is_irreducible(f, q)) return f;
  }
  throw std::runtime_error("find_frd_poly: no irreducible x^n + x + c mod q");
}

ZqMatrix frd_encode(const ZqVector& id,
                    const std::vector<std::uint64_t>& frd_poly) {
  std::size_t n = id.size();
  if (frd_poly.size() != n + 1 || frd_poly.back() != 1)
    throw std::invalid_argument("frd_encode: modulus degree mismatch");
  std::uint64_t q = id.q;
  ZqMatrix h(q, n, n);
  // Column j holds the coefficients of g * x^j mod f.
  std::vector<std::uint64_t> col(id.v.begin(), id.v.end());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) h.at(i, j) = col[i];
    if (j + 1 == n) break;
    // Multiply by x: shift up and reduce the overflow against f.
    std::uint64_t top = col[n - 1];
    for (std::size_t i = n - 1; i > 0; --i) col[i] = col[i - 1];
    col[0] = 0;
    if (top != 0) {
      for (std::size_t i = 0; i < n; ++i) {
        col[i] = sub_mod(col[i], mul_mod(top, frd_poly[i], q), q);
      }
    }
  }
  return h;
}

}  // namespace ibpre
