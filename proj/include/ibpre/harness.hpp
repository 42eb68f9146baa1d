// harness.hpp - Monte-Carlo evidence for the decryption-correctness bounds
// and for sampler quality.
//
// Determinism contract: all pool objects (setup, identities, secrets,
// re-keys) are drawn from the stream derive(2^64-1) of the caller's rng
// seed, and trial t draws from derive(t).  Reports are therefore a pure
// function of (seed, parameters, knobs), independent of scheduling.

#pragma once

#include <string>
#include <vector>

#include "ibpre/serialize.hpp"

namespace ibpre {

struct TrialReport {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;       // decrypted bit != encrypted bit
  std::uint64_t max_abs_error = 0;  // max |b' - bit*floor(q/2)| centered
  std::uint64_t budget = 0;         // floor(q/4)
  double mean_abs_error = 0.0;
  // 16 equal-width buckets over [0, budget) plus one overflow bucket.
  std::vector<std::uint64_t> histogram;
};

// Fresh-ciphertext roundtrips: extract / encrypt / decrypt, random identity
// and bit per group/trial.  trials_per_id > 1 amortizes extraction across
// consecutive trials (the adaptive scheme pays a covariance factorization
// per identity).
TrialReport roundtrip_trials(SchemeTag scheme, const ParamSet& ps,
                             std::uint64_t trials, Rng& rng,
                             std::uint64_t trials_per_id = 1);

// Adds rekey + reencrypt between encrypt and decrypt; the delegatee
// decrypts.  trials_per_pair amortizes the two extractions and the re-key.
TrialReport reenc_trials(SchemeTag scheme, const ParamSet& ps,
                         std::uint64_t trials, Rng& rng,
                         std::uint64_t trials_per_pair = 1);

struct CheckRow {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // |measured - expected| <= tolerance to pass
  bool pass = false;
};

struct SamplerChecks {
  std::vector<CheckRow> rows;
  bool all_pass() const {
    for (const CheckRow& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

struct SamplerCheckConfig {
  std::uint64_t z_draws = 1000000;  // integer-sampler moment sample size
  double z_width = 10.0;
  std::uint64_t g_draws = 2000;     // gadget-sampler draws (nk coords each)
  std::uint64_t pre_draws = 200;    // preimage draws (m coords each)
  std::uint64_t frd_pairs = 1000;   // full-rank sweep size
  std::uint64_t setups = 20;        // public-block uniformity sample
};

// Moment tests (mean/std of sample_z, pooled per-coordinate std of sample_g
// and of preimage batches), the identity-encoding full-rank sweep, and a
// chi-square uniformity check on fresh public blocks.  Zero-size knobs
// skip their rows (an empty config passes trivially).
SamplerChecks sampler_checks(const ParamSet& ps, Rng& rng,
                             const SamplerCheckConfig& cfg = {});

std::string to_csv(const TrialReport& report);
std::string to_csv(const SamplerChecks& checks);

}  // namespace ibpre
