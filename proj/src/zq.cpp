// zq.cpp - exact Z_q arithmetic.  Inner products accumulate raw 128-bit sums
// and reduce once per chunk; the chunk stride is sized so stride*(q-1)^2 plus
// a reduced carry never overflows 128 bits, which makes the hot paths one
// widening multiply per term at production moduli (q ~ 2^39 gives a stride
// of ~2^50, so the reduction runs once per output entry).

#include "ibpre/zq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ibpre {

namespace {

using u128 = unsigned __int128;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Largest number of (q-1)^2 terms addable after a reduced (< q) carry-in.
std::size_t acc_stride(std::uint64_t q) {
  if (q <= 1) return SIZE_MAX;
  u128 term = static_cast<u128>(q - 1) * (q - 1);
  u128 cap = (~static_cast<u128>(0) - (q - 1)) / term;
  if (cap >= static_cast<u128>(SIZE_MAX)) return SIZE_MAX;
  return static_cast<std::size_t>(cap);
}

}  // namespace

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t q) {
  std::uint64_t acc = 1 % q;
  std::uint64_t b = base % q;
  while (exp != 0) {
    if (exp & 1) acc = mul_mod(acc, b, q);
    b = mul_mod(b, b, q);
    exp >>= 1;
  }
  return acc;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t q) {
  // Extended Euclid on (a, q); coefficients tracked for a only.
  std::int64_t t0 = 0, t1 = 1;
  std::uint64_t r0 = q, r1 = a % q;
  while (r1 != 0) {
    std::uint64_t quot = r0 / r1;
    std::uint64_t r2 = r0 - quot * r1;
    r0 = r1;
    r1 = r2;
    std::int64_t t2 = t0 - static_cast<std::int64_t>(quot) * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) throw std::domain_error("inv_mod: value not invertible");
  return lift_mod(t0, q);
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is a proven deterministic witness set for n < 2^64.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  if ((n & 1) == 0) ++n;
  while (!is_prime_u64(n)) {
    if (n > UINT64_MAX - 2) throw std::overflow_error("next_prime: overflow");
    n += 2;
  }
  return n;
}

ZqVector add(const ZqVector& a, const ZqVector& b) {
  require(a.q == b.q && a.size() == b.size(), "add: shape mismatch");
  ZqVector out(a.q, a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = add_mod(a[i], b[i], a.q);
  return out;
}

ZqVector sub(const ZqVector& a, const ZqVector& b) {
  require(a.q == b.q && a.size() == b.size(), "sub: shape mismatch");
  ZqVector out(a.q, a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = sub_mod(a[i], b[i], a.q);
  return out;
}

std::uint64_t dot(const ZqVector& a, const ZqVector& b) {
  require(a.q == b.q && a.size() == b.size(), "dot: shape mismatch");
  const std::size_t stride = acc_stride(a.q);
  u128 acc = 0;
  for (std::size_t i0 = 0; i0 < a.size(); i0 += stride) {
    std::size_t end = std::min(a.size(), i0 + stride);
    for (std::size_t i = i0; i < end; ++i)
      acc += static_cast<u128>(a[i]) * b[i];
    acc %= a.q;
  }
  return static_cast<std::uint64_t>(acc);
}

ZqMatrix mat_mul(const ZqMatrix& a, const ZqMatrix& b) {
  require(a.q == b.q && a.cols == b.rows, "mat_mul: shape mismatch");
  ZqMatrix out(a.q, a.rows, b.cols);
  const std::size_t stride = acc_stride(a.q);
  std::vector<u128> acc(b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::fill(acc.begin(), acc.end(), u128{0});
    const std::uint64_t* arow = a.row(i);
    for (std::size_t t0 = 0; t0 < a.cols; t0 += stride) {
      std::size_t tend = std::min(a.cols, t0 + stride);
      for (std::size_t t = t0; t < tend; ++t) {
        std::uint64_t av = arow[t];
        if (av == 0) continue;
        const std::uint64_t* brow = b.row(t);
        for (std::size_t j = 0; j < b.cols; ++j)
          acc[j] += static_cast<u128>(av) * brow[j];
      }
      if (tend < a.cols)
        for (auto& x : acc) x %= a.q;
    }
    std::uint64_t* orow = out.row(i);
    for (std::size_t j = 0; j < b.cols; ++j)
      orow[j] = static_cast<std::uint64_t>(acc[j] % a.q);
  }
  return out;
}

ZqVector mat_vec(const ZqMatrix& a, const ZqVector& x) {
  require(a.q == x.q && a.cols == x.size(), "mat_vec: shape mismatch");
  const std::size_t stride = acc_stride(a.q);
  ZqVector out(a.q, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const std::uint64_t* arow = a.row(i);
    u128 acc = 0;
    for (std::size_t j0 = 0; j0 < a.cols; j0 += stride) {
      std::size_t end = std::min(a.cols, j0 + stride);
      for (std::size_t j = j0; j < end; ++j)
        acc += static_cast<u128>(arow[j]) * x[j];
      acc %= a.q;
    }
    out[i] = static_cast<std::uint64_t>(acc);
  }
  return out;
}

ZqVector mat_tvec(const ZqMatrix& a, const ZqVector& x) {
  require(a.q == x.q && a.rows == x.size(), "mat_tvec: shape mismatch");
  const std::size_t stride = acc_stride(a.q);
  std::vector<u128> acc(a.cols, 0);
  for (std::size_t i0 = 0; i0 < a.rows; i0 += stride) {
    std::size_t iend = std::min(a.rows, i0 + stride);
    for (std::size_t i = i0; i < iend; ++i) {
      std::uint64_t xi = x[i];
      if (xi == 0) continue;
      const std::uint64_t* arow = a.row(i);
      for (std::size_t j = 0; j < a.cols; ++j)
        acc[j] += static_cast<u128>(arow[j]) * xi;
    }
    if (iend < a.rows)
      for (auto& v : acc) v %= a.q;
  }
  ZqVector out(a.q, a.cols);
  for (std::size_t j = 0; j < a.cols; ++j)
    out[j] = static_cast<std::uint64_t>(acc[j] % a.q);
  return out;
}

ZqVector mat_vec_int(const ZqMatrix& a, const IntVector& x) {
  require(a.cols == x.size(), "mat_vec_int: shape mismatch");
  return mat_vec(a, lift_vec(x, a.q));
}

ZqMatrix mat_mul_int(const ZqMatrix& a, const IntMatrix& r) {
  require(a.cols == r.rows, "mat_mul_int: shape mismatch");
  ZqMatrix out(a.q, a.rows, r.cols);
  const std::size_t stride = acc_stride(a.q);
  std::vector<u128> acc(r.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::fill(acc.begin(), acc.end(), u128{0});
    const std::uint64_t* arow = a.row(i);
    for (std::size_t t0 = 0; t0 < a.cols; t0 += stride) {
      std::size_t tend = std::min(a.cols, t0 + stride);
      for (std::size_t t = t0; t < tend; ++t) {
        std::uint64_t av = arow[t];
        if (av == 0) continue;
        const std::int64_t* rrow = r.row(t);
        for (std::size_t j = 0; j < r.cols; ++j)
          acc[j] += static_cast<u128>(av) * lift_mod(rrow[j], a.q);
      }
      if (tend < a.cols)
        for (auto& x : acc) x %= a.q;
    }
    std::uint64_t* orow = out.row(i);
    for (std::size_t j = 0; j < r.cols; ++j)
      orow[j] = static_cast<std::uint64_t>(acc[j] % a.q);
  }
  return out;
}

ZqVector tvec_int(const IntMatrix& r, const ZqVector& x) {
  require(r.rows == x.size(), "tvec_int: shape mismatch");
  const std::size_t stride = acc_stride(x.q);
  std::vector<u128> acc(r.cols, 0);
  for (std::size_t i0 = 0; i0 < r.rows; i0 += stride) {
    std::size_t iend = std::min(r.rows, i0 + stride);
    for (std::size_t i = i0; i < iend; ++i) {
      std::uint64_t xi = x[i];
      if (xi == 0) continue;
      const std::int64_t* rrow = r.row(i);
      for (std::size_t j = 0; j < r.cols; ++j)
        acc[j] += static_cast<u128>(xi) * lift_mod(rrow[j], x.q);
    }
    if (iend < r.rows)
      for (auto& v : acc) v %= x.q;
  }
  ZqVector out(x.q, r.cols);
  for (std::size_t j = 0; j < r.cols; ++j)
    out[j] = static_cast<std::uint64_t>(acc[j] % x.q);
  return out;
}

ZqMatrix mat_int_mul(const IntMatrix& r, const ZqMatrix& a) {
  require(r.cols == a.rows, "mat_int_mul: shape mismatch");
  ZqMatrix out(a.q, r.rows, a.cols);
  const std::size_t stride = acc_stride(a.q);
  std::vector<u128> acc(a.cols);
  for (std::size_t i = 0; i < r.rows; ++i) {
    std::fill(acc.begin(), acc.end(), u128{0});
    const std::int64_t* rrow = r.row(i);
    for (std::size_t t0 = 0; t0 < r.cols; t0 += stride) {
      std::size_t tend = std::min(r.cols, t0 + stride);
      for (std::size_t t = t0; t < tend; ++t) {
        std::uint64_t rv = lift_mod(rrow[t], a.q);
        if (rv == 0) continue;
        const std::uint64_t* arow = a.row(t);
        for (std::size_t j = 0; j < a.cols; ++j)
          acc[j] += static_cast<u128>(rv) * arow[j];
      }
      if (tend < r.cols)
        for (auto& x : acc) x %= a.q;
    }
    std::uint64_t* orow = out.row(i);
    for (std::size_t j = 0; j < a.cols; ++j)
      orow[j] = static_cast<std::uint64_t>(acc[j] % a.q);
  }
  return out;
}

ZqVector mat_int_vec(const IntMatrix& r, const ZqVector& x) {
  require(r.cols == x.size(), "mat_int_vec: shape mismatch");
  const std::size_t stride = acc_stride(x.q);
  ZqVector out(x.q, r.rows);
  for (std::size_t i = 0; i < r.rows; ++i) {
    const std::int64_t* rrow = r.row(i);
    u128 acc = 0;
    for (std::size_t j0 = 0; j0 < r.cols; j0 += stride) {
      std::size_t jend = std::min(r.cols, j0 + stride);
      for (std::size_t j = j0; j < jend; ++j)
        acc += static_cast<u128>(lift_mod(rrow[j], x.q)) * x[j];
      acc %= x.q;
    }
    out[i] = static_cast<std::uint64_t>(acc);
  }
  return out;
}

std::uint64_t dot_int(const IntVector& x, const ZqVector& y) {
  require(x.size() == y.size(), "dot_int: shape mismatch");
  const std::size_t stride = acc_stride(y.q);
  u128 acc = 0;
  for (std::size_t i0 = 0; i0 < x.size(); i0 += stride) {
    std::size_t end = std::min(x.size(), i0 + stride);
    for (std::size_t i = i0; i < end; ++i)
      acc += static_cast<u128>(lift_mod(x[i], y.q)) * y[i];
    acc %= y.q;
  }
  return static_cast<std::uint64_t>(acc);
}

ZqMatrix transpose(const ZqMatrix& a) {
  ZqMatrix out(a.q, a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) out.at(j, i) = a.at(i, j);
  return out;
}

ZqVector lift_vec(const IntVector& x, std::uint64_t q) {
  ZqVector out(q, x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = lift_mod(x[i], q);
  return out;
}

IntVector center_vec(const ZqVector& x) {
  IntVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = center_mod(x[i], x.q);
  return out;
}

std::uint64_t det_mod(const ZqMatrix& a) {
  require(a.rows == a.cols, "det_mod: square matrix required");
  ZqMatrix w = a;
  std::uint64_t q = a.q;
  std::uint64_t det = 1 % q;
  for (std::size_t col = 0; col < w.cols; ++col) {
    std::size_t pivot = col;
    while (pivot < w.rows && w.at(pivot, col) == 0) ++pivot;
    if (pivot == w.rows) return 0;
    if (pivot != col) {
      for (std::size_t j = 0; j < w.cols; ++j)
        std::swap(w.at(pivot, j), w.at(col, j));
      det = sub_mod(0, det, q);
    }
    std::uint64_t pv = w.at(col, col);
    det = mul_mod(det, pv, q);
    std::uint64_t pinv = inv_mod(pv, q);
    for (std::size_t i = col + 1; i < w.rows; ++i) {
      std::uint64_t factor = mul_mod(w.at(i, col), pinv, q);
      if (factor == 0) continue;
      for (std::size_t j = col; j < w.cols; ++j) {
        w.at(i, j) = sub_mod(w.at(i, j), mul_mod(factor, w.at(col, j), q), q);
      }
    }
  }
  return det;
}

ZqMatrix inv_matrix(const ZqMatrix& a) {
  require(a.rows == a.cols, "inv_matrix: square matrix required");
  std::uint64_t q = a.q;
  std::size_t n = a.rows;
  ZqMatrix w = a;
  ZqMatrix inv(q, n, n);
  for (std::size_t i = 0; i < n; ++i) inv.at(i, i) = 1 % q;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && w.at(pivot, col) == 0) ++pivot;
    if (pivot == n) throw std::domain_error("inv_matrix: singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w.at(pivot, j), w.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    std::uint64_t pinv = inv_mod(w.at(col, col), q);
    for (std::size_t j = 0; j < n; ++j) {
      w.at(col, j) = mul_mod(w.at(col, j), pinv, q);
      inv.at(col, j) = mul_mod(inv.at(col, j), pinv, q);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      std::uint64_t factor = w.at(i, col);
      if (factor == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        w.at(i, j) = sub_mod(w.at(i, j), mul_mod(factor, w.at(col, j), q), q);
        inv.at(i, j) =
            sub_mod(inv.at(i, j), mul_mod(factor, inv.at(col, j), q), q);
      }
    }
  }
  return inv;
}

IntVector bd(const ZqVector& x, unsigned k) {
  IntVector out(x.size() * k);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::uint64_t v = x[i];
    for (unsigned j = 0; j < k; ++j) {
      out[i * k + j] = static_cast<std::int64_t>((v >> j) & 1);
    }
  }
  return out;
}

ZqVector p2(const ZqVector& y, unsigned k) {
  ZqVector out(y.q, y.size() * k);
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::uint64_t v = y[i];
    for (unsigned j = 0; j < k; ++j) {
      out[i * k + j] = v;
      v = add_mod(v, v, y.q);
    }
  }
  return out;
}

ZqVector p2_int(const IntVector& y, unsigned k, std::uint64_t q) {
  return p2(lift_vec(y, q), k);
}

ZqMatrix gadget_matrix(std::size_t n, unsigned k, std::uint64_t q) {
  ZqMatrix g(q, n, n * k);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t v = 1 % q;
    for (unsigned j = 0; j < k; ++j) {
      g.at(i, i * k + j) = v;
      v = add_mod(v, v, q);
    }
  }
  return g;
}

ZqVector gadget_mul(const IntVector& z, std::size_t n, unsigned k,
                    std::uint64_t q) {
  require(z.size() == n * k, "gadget_mul: shape mismatch");
  ZqVector out(q, n);
  for (std::size_t i = 0; i < n; ++i) {
    u128 acc = 0;
    std::uint64_t v = 1 % q;
    for (unsigned j = 0; j < k; ++j) {
      acc += static_cast<u128>(v) * lift_mod(z[i * k + j], q);
      acc %= q;
      v = add_mod(v, v, q);
    }
    out[i] = static_cast<std::uint64_t>(acc);
  }
  return out;
}

double norm(const IntVector& x) {
  double acc = 0.0;
  for (std::int64_t v : x.v) acc += static_cast<double>(v) * v;
  return std::sqrt(acc);
}

}  // namespace ibpre
