// harness.cpp - Monte-Carlo trial runners and sampler diagnostics.

#include "ibpre/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "ibpre/frd.hpp"
#include "ibpre/gaussian.hpp"

namespace ibpre {

namespace {

constexpr std::uint64_t kPoolStream = ~std::uint64_t{0};
constexpr std::size_t kBuckets = 16;
const double kSqrt2Pi = std::sqrt(2.0 * std::acos(-1.0));

class Recorder {
 public:
  Recorder(std::uint64_t q, std::uint64_t trials) {
    rep_.trials = trials;
    rep_.budget = q / 4;
    rep_.histogram.assign(kBuckets + 1, 0);
    width_ = std::max<std::uint64_t>(1, (rep_.budget + kBuckets - 1) / kBuckets);
  }

  void add(std::int64_t residue, bool wrong) {
    const std::uint64_t mag =
        residue < 0 ? static_cast<std::uint64_t>(-residue)
                    : static_cast<std::uint64_t>(residue);
    rep_.max_abs_error = std::max(rep_.max_abs_error, mag);
    sum_ += mag;
    if (wrong) ++rep_.failures;
    if (mag >= rep_.budget)
      ++rep_.histogram[kBuckets];
    else
      ++rep_.histogram[std::min<std::uint64_t>(kBuckets - 1, mag / width_)];
  }

  TrialReport finish() {
    if (rep_.trials > 0)
      rep_.mean_abs_error =
          static_cast<double>(sum_) / static_cast<double>(rep_.trials);
    return std::move(rep_);
  }

 private:
  TrialReport rep_;
  unsigned __int128 sum_ = 0;
  std::uint64_t width_ = 1;
};

ZqVector random_nonzero_id(const ParamSet& ps, Rng& rng) {
  ZqVector id(ps.q, ps.n);
  for (;;) {
    bool nonzero = false;
    for (std::size_t i = 0; i < ps.n; ++i) {
      id[i] = rng.uniform_below(ps.q);
      nonzero = nonzero || id[i] != 0;
    }
    if (nonzero) return id;
  }
}

IdentityBits random_bits(const ParamSet& ps, Rng& rng) {
  IdentityBits id;
  id.bits.resize(ps.l);
  for (std::size_t i = 0; i < ps.l; ++i)
    id.bits[i] = rng.next_bits(1) != 0 ? 1 : -1;
  return id;
}

// Scheme-independent view of one identity: its matrix, syndrome and secret.
struct IdentityPool {
  ZqMatrix a_id;
  ZqVector u_id;
  UserSecret sk;
};

struct World {
  ParamSet ps;
  std::optional<PublicParams> sel_pp;
  std::optional<MasterKey> sel_msk;
  std::optional<Extractor> sel_ex;
  std::optional<PublicParamsA> ada_pp;
  std::optional<MasterKeyA> ada_msk;

  static World create(SchemeTag scheme, const ParamSet& ps, Rng& rng) {
    World w;
    w.ps = ps;
    if (scheme == SchemeTag::selective) {
      auto [pp, msk] = setup(ps, rng);
      w.sel_pp = std::move(pp);
      w.sel_msk = std::move(msk);
      w.sel_ex.emplace(*w.sel_pp, *w.sel_msk);
    } else {
      auto [pp, msk] = setup_a(ps, rng);
      w.ada_pp = std::move(pp);
      w.ada_msk = std::move(msk);
    }
    return w;
  }

  IdentityPool fresh_identity(Rng& rng) const {
    IdentityPool pool;
    if (sel_pp) {
      ZqVector id = random_nonzero_id(ps, rng);
      pool.a_id = build_a_id(*sel_pp, id);
      pool.u_id = sel_pp->u;
      pool.sk = sel_ex->extract(id, rng);
    } else {
      IdentityBits id = random_bits(ps, rng);
      IdentityData data = derive_identity_data(*ada_pp, id);
      pool.a_id = std::move(data.a_id);
      pool.u_id = std::move(data.u_id);
      pool.sk = extract_a(*ada_pp, *ada_msk, id, rng);
    }
    return pool;
  }
};

}  // namespace

TrialReport roundtrip_trials(SchemeTag scheme, const ParamSet& ps,
                             std::uint64_t trials, Rng& rng,
                             std::uint64_t trials_per_id) {
  Recorder rec(ps.q, trials);
  if (trials == 0) return rec.finish();
  if (trials_per_id == 0) trials_per_id = 1;

  Rng pool_rng = rng.derive(kPoolStream);
  World world = World::create(scheme, ps, pool_rng);

  std::uint64_t t = 0;
  while (t < trials) {
    IdentityPool pool = world.fresh_identity(pool_rng);
    for (std::uint64_t j = 0; j < trials_per_id && t < trials; ++j, ++t) {
      Rng tr = rng.derive(t);
      const int bit = tr.next_bits(1) != 0 ? 1 : 0;
      Ciphertext ct = encrypt_core(ps, pool.a_id, pool.u_id, bit, tr);
      rec.add(decrypt_residue(ps.q, pool.sk.x, ct, bit),
              decrypt_bit(ps.q, pool.sk.x, ct) != bit);
    }
  }
  return rec.finish();
}

TrialReport reenc_trials(SchemeTag scheme, const ParamSet& ps,
                         std::uint64_t trials, Rng& rng,
                         std::uint64_t trials_per_pair) {
  Recorder rec(ps.q, trials);
  if (trials == 0) return rec.finish();
  if (trials_per_pair == 0) trials_per_pair = 1;

  Rng pool_rng = rng.derive(kPoolStream);
  World world = World::create(scheme, ps, pool_rng);

  std::uint64_t t = 0;
  while (t < trials) {
    IdentityPool from = world.fresh_identity(pool_rng);
    IdentityPool to = world.fresh_identity(pool_rng);
    ReKeyCompact rk =
        rekey_compact(ps, from.sk.x, to.a_id, to.u_id, from.sk.id, to.sk.id,
                      pool_rng);
    for (std::uint64_t j = 0; j < trials_per_pair && t < trials; ++j, ++t) {
      Rng tr = rng.derive(t);
      const int bit = tr.next_bits(1) != 0 ? 1 : 0;
      Ciphertext ct = encrypt_core(ps, from.a_id, from.u_id, bit, tr);
      Ciphertext ct2 = reencrypt(ps, rk, ct);
      rec.add(decrypt_residue(ps.q, to.sk.x, ct2, bit),
              decrypt_bit(ps.q, to.sk.x, ct2) != bit);
    }
  }
  return rec.finish();
}

SamplerChecks sampler_checks(const ParamSet& ps, Rng& rng,
                             const SamplerCheckConfig& cfg) {
  SamplerChecks out;
  Rng pool_rng = rng.derive(kPoolStream);

  if (cfg.z_draws > 0) {
    long double sum = 0.0L, sum_sq = 0.0L;
    for (std::uint64_t i = 0; i < cfg.z_draws; ++i) {
      const double x = static_cast<double>(sample_z(0.0, cfg.z_width, rng));
      sum += x;
      sum_sq += x * x;
    }
    const double n = static_cast<double>(cfg.z_draws);
    const double mean = static_cast<double>(sum) / n;
    const double var = static_cast<double>(sum_sq) / n - mean * mean;
    const double want_std = cfg.z_width / kSqrt2Pi;
    out.rows.push_back({"z_mean", mean, 0.0, 0.02 * want_std,
                        std::fabs(mean) <= 0.02 * want_std});
    const double got_std = std::sqrt(std::max(0.0, var));
    out.rows.push_back({"z_std", got_std, want_std, 0.02 * want_std,
                        std::fabs(got_std - want_std) <= 0.02 * want_std});
  }

  if (cfg.g_draws > 0) {
    const double w = std::sqrt(5.0) * ps.r;
    long double sum_sq = 0.0L;
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < cfg.g_draws; ++i) {
      ZqVector v(ps.q, ps.n);
      for (std::size_t j = 0; j < ps.n; ++j) v[j] = rng.uniform_below(ps.q);
      IntVector z = sample_g(v, ps.k, w, rng);
      for (std::size_t j = 0; j < z.size(); ++j)
        sum_sq += static_cast<long double>(z[j]) * z[j];
      count += z.size();
    }
    const double got =
        std::sqrt(static_cast<double>(sum_sq) / static_cast<double>(count));
    const double want = w / kSqrt2Pi;
    out.rows.push_back({"g_coord_std", got, want, 0.05 * want,
                        std::fabs(got - want) <= 0.05 * want});
  }

  if (cfg.pre_draws > 0) {
    ZqMatrix a_bar(ps.q, ps.n, ps.mbar);
    for (auto& x : a_bar.a) x = pool_rng.uniform_below(ps.q);
    ZqMatrix eye(ps.q, ps.n, ps.n);
    for (std::size_t i = 0; i < ps.n; ++i) eye.at(i, i) = 1 % ps.q;
    TrapPair pair = gen_trapdoor(ps, a_bar, eye, pool_rng);
    PreimageSampler sampler(ps, pair.trapdoor.r_mat, ps.s);
    long double sum_sq = 0.0L;
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < cfg.pre_draws; ++i) {
      ZqVector u(ps.q, ps.n);
      for (std::size_t j = 0; j < ps.n; ++j) u[j] = rng.uniform_below(ps.q);
      IntVector x = sampler.sample(pair.a_mat, eye, u, rng);
      for (std::size_t j = 0; j < x.size(); ++j)
        sum_sq += static_cast<long double>(x[j]) * x[j];
      count += x.size();
    }
    const double got =
        std::sqrt(static_cast<double>(sum_sq) / static_cast<double>(count));
    const double want = ps.s / kSqrt2Pi;
    out.rows.push_back({"pre_coord_std", got, want, 0.10 * want,
                        std::fabs(got - want) <= 0.10 * want});
  }

  if (cfg.frd_pairs > 0) {
    std::uint64_t violations = 0;
    for (std::uint64_t i = 0; i < cfg.frd_pairs; ++i) {
      ZqVector id1 = random_nonzero_id(ps, rng);
      ZqVector id2 = random_nonzero_id(ps, rng);
      if (id1 == id2) continue;
      ZqMatrix h1 = frd_encode(id1, ps.frd_poly);
      ZqMatrix h2 = frd_encode(id2, ps.frd_poly);
      if (det_mod(h1) == 0) ++violations;
      ZqMatrix diff(ps.q, ps.n, ps.n);
      for (std::size_t e = 0; e < diff.a.size(); ++e)
        diff.a[e] = sub_mod(h1.a[e], h2.a[e], ps.q);
      if (det_mod(diff) == 0) ++violations;
    }
    out.rows.push_back({"frd_rank_violations",
                        static_cast<double>(violations), 0.0, 0.0,
                        violations == 0});
  }

  if (cfg.setups > 0) {
    // Chi-square of right-block entries against uniform, 16 cells.
    const std::uint64_t cell = std::max<std::uint64_t>(1, (ps.q + 15) / 16);
    std::vector<std::uint64_t> counts(16, 0);
    std::uint64_t total = 0;
    ZqMatrix zero_tag(ps.q, ps.n, ps.n);
    for (std::uint64_t i = 0; i < cfg.setups; ++i) {
      ZqMatrix a_bar(ps.q, ps.n, ps.mbar);
      for (auto& x : a_bar.a) x = pool_rng.uniform_below(ps.q);
      TrapPair pair = gen_trapdoor(ps, a_bar, zero_tag, pool_rng);
      for (std::size_t r0 = 0; r0 < ps.n; ++r0) {
        const std::uint64_t* row = pair.a_mat.row(r0) + ps.mbar;
        for (std::size_t j = 0; j < ps.nk(); ++j) {
          ++counts[std::min<std::uint64_t>(15, row[j] / cell)];
          ++total;
        }
      }
    }
    double chi2 = 0.0;
    double dof = 0.0;
    for (std::size_t b = 0; b < 16; ++b) {
      const std::uint64_t lo = b * cell;
      if (lo >= ps.q) break;
      const std::uint64_t size = std::min(cell, ps.q - lo);
      const double expect = static_cast<double>(total) *
                            static_cast<double>(size) /
                            static_cast<double>(ps.q);
      const double d = static_cast<double>(counts[b]) - expect;
      chi2 += d * d / expect;
      dof += 1.0;
    }
    dof = std::max(1.0, dof - 1.0);
    // Mean of a chi-square is its dof; the band is wide enough that a false
    // alarm is ~1e-7 while gross non-uniformity still lands far outside.
    out.rows.push_back(
        {"block_uniformity_chi2", chi2, dof, 3.0 * dof, chi2 <= 4.0 * dof});
  }
  return out;
}

std::string to_csv(const TrialReport& report) {
  std::string out = "metric,value\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "trials,%llu\n",
                static_cast<unsigned long long>(report.trials));
  out += buf;
  std::snprintf(buf, sizeof(buf), "failures,%llu\n",
                static_cast<unsigned long long>(report.failures));
  out += buf;
  std::snprintf(buf, sizeof(buf), "max_abs_error,%llu\n",
                static_cast<unsigned long long>(report.max_abs_error));
  out += buf;
  std::snprintf(buf, sizeof(buf), "budget,%llu\n",
                static_cast<unsigned long long>(report.budget));
  out += buf;
  std::snprintf(buf, sizeof(buf), "mean_abs_error,%.6f\n",
                report.mean_abs_error);
  out += buf;
  out += "bucket_low,bucket_high,count\n";
  const std::uint64_t width =
      std::max<std::uint64_t>(1, (report.budget + kBuckets - 1) / kBuckets);
  for (std::size_t b = 0; b < report.histogram.size(); ++b) {
    const bool overflow = b == kBuckets;
    const std::uint64_t lo = overflow ? report.budget : b * width;
    const std::uint64_t hi =
        overflow ? ~std::uint64_t{0} : std::min(report.budget, lo + width);
    std::snprintf(buf, sizeof(buf), "%llu,%llu,%llu\n",
                  static_cast<unsigned long long>(lo),
                  static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(report.histogram[b]));
    out += buf;
  }
  return out;
}

std::string to_csv(const SamplerChecks& checks) {
  std::string out = "name,measured,expected,tolerance,pass\n";
  char buf[256];
  for (const CheckRow& r : checks.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.6g,%d\n", r.name.c_str(),
                  r.measured, r.expected, r.tolerance, r.pass ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace ibpre
