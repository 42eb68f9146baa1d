// gaussian.cpp - two sampling paths chosen by width and center:
//   - integer center, s < 2^10: inversion against a cached cumulative table
//     (support +-floor(6s), thresholds scaled to 2^64);
//   - otherwise: rejection from a two-sided geometric proposal
//     P(y) ~ lambda^|y| with lambda = exp(-sqrt(2*pi)/s).  The bound
//     log M = 1/2 + sqrt(2*pi)*|delta|/s dominates the target/proposal
//     ratio (maximize -pi*(y-delta)^2/s^2 + p*|y| over real y), so
//     acceptance stays above 1/3 even at the worst fractional center.

#include "ibpre/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace ibpre {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTableWidthCap = 1024.0;  // 2^10

struct CumTable {
  std::int64_t radius = 0;
  // thresh[i] = round(2^64 * P(X <= -radius + i)); the last bucket is
  // implicit, so thresh has 2*radius entries.
  std::vector<std::uint64_t> thresh;
};

std::shared_ptr<const CumTable> table_for(double s) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const CumTable>> cache;

  std::uint64_t key;
  static_assert(sizeof(key) == sizeof(s));
  std::memcpy(&key, &s, sizeof(key));

  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  auto table = std::make_shared<CumTable>();
  table->radius = static_cast<std::int64_t>(std::floor(6.0 * s));
  std::int64_t radius = table->radius;
  std::size_t count = static_cast<std::size_t>(2 * radius + 1);
  std::vector<long double> weight(count);
  long double total = 0.0L;
  for (std::size_t i = 0; i < count; ++i) {
    long double y = static_cast<long double>(static_cast<std::int64_t>(i) -
                                             radius);
    weight[i] = std::exp(-static_cast<long double>(kPi) * y * y / (s * s));
    total += weight[i];
  }
  table->thresh.resize(count - 1);
  long double cum = 0.0L;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    cum += weight[i];
    long double scaled = std::ldexp(cum / total, 64);
    unsigned __int128 t = scaled >= std::ldexp(1.0L, 64)
                              ? ~static_cast<unsigned __int128>(0)
                              : static_cast<unsigned __int128>(scaled);
    table->thresh[i] = t > static_cast<unsigned __int128>(UINT64_MAX)
                           ? UINT64_MAX
                           : static_cast<std::uint64_t>(t);
  }
  cache.emplace(key, table);
  return table;
}

std::int64_t sample_table(std::int64_t center, double s, Rng& rng) {
  auto table = table_for(s);
  std::uint64_t u = rng.next_u64();
  auto it = std::upper_bound(table->thresh.begin(), table->thresh.end(), u);
  std::int64_t idx = it - table->thresh.begin();
  return center + idx - table->radius;
}

// Degenerate support: 6s < 1, so at most one integer can fall inside the
// cut around a fractional center.
std::int64_t sample_narrow(double c, double s, Rng& rng) {
  double lo = std::ceil(c - 6.0 * s);
  double hi = std::floor(c + 6.0 * s);
  if (lo > hi)
    throw std::domain_error("sample_z: no integer within the 6s tail cut");
  std::int64_t zlo = static_cast<std::int64_t>(lo);
  std::int64_t zhi = static_cast<std::int64_t>(hi);
  if (zlo == zhi) return zlo;
  // Two candidates; pick by exact relative weight.
  long double wlo =
      std::exp(-static_cast<long double>(kPi) * (zlo - c) * (zlo - c) /
               (s * s));
  long double whi =
      std::exp(-static_cast<long double>(kPi) * (zhi - c) * (zhi - c) /
               (s * s));
  long double cut = wlo / (wlo + whi);
  return rng.next_unit() < static_cast<double>(cut) ? zlo : zhi;
}

std::int64_t sample_reject(double c, double s, Rng& rng) {
  double t = std::floor(c + 0.5);
  double delta = c - t;  // in [-1/2, 1/2]
  double p = std::sqrt(2.0 * kPi) / s;
  double log_m = 0.5 + p * std::fabs(delta);
  for (;;) {
    double u = std::max(rng.next_unit(), 0x1p-60);
    std::int64_t g = static_cast<std::int64_t>(std::floor(-std::log(u) / p));
    bool negative = rng.next_bits(1) != 0;
    if (g == 0 && negative) continue;
    double y = negative ? -static_cast<double>(g) : static_cast<double>(g);
    if (std::fabs(y - delta) > 6.0 * s) continue;
    double log_acc =
        -kPi * (y - delta) * (y - delta) / (s * s) + p * std::fabs(y) - log_m;
    if (rng.next_unit() < std::exp(log_acc))
      return static_cast<std::int64_t>(t + y);
  }
}

}  // namespace

std::int64_t sample_z(double c, double s, Rng& rng) {
  if (!(s > 0.0)) throw std::invalid_argument("sample_z: width must be > 0");
  bool integer_center = std::floor(c) == c && std::fabs(c) < 0x1p62;
  if (integer_center && s < kTableWidthCap)
    return sample_table(static_cast<std::int64_t>(c), s, rng);
  if (6.0 * s < 1.0) return sample_narrow(c, s, rng);
  return sample_reject(c, s, rng);
}

IntVector sample_vec(std::size_t dim, double s, Rng& rng) {
  IntVector out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = sample_z(0.0, s, rng);
  return out;
}

IntMatrix sample_mat(std::size_t rows, std::size_t cols, double s, Rng& rng) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("sample_mat: zero dimension");
  IntMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = sample_z(0.0, s, rng);
  return out;
}

}  // namespace ibpre
