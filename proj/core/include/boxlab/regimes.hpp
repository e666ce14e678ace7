#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "boxlab/distribution.hpp"

namespace boxlab {

// Noise-regime membership for a supplied c.  Pivot indices are 1-based in
// the report, matching the sigma_{cn} / sigma_{n^c} convention.
struct RegimeReport {
  std::size_t n = 0;
  double c = 0.0;
  bool mhr = false;  // distribution passed the hazard grid check

  std::size_t pivot_cn = 0;  // round(c*n), clamped to [1, n]
  std::size_t pivot_nc = 0;  // round(n^c), clamped to [1, n]
  double sigma_at_cn = 0.0;
  double sigma_at_nc = 0.0;

  double small_threshold = 0.0;       // E[D_{cn:cn}] / (5 sqrt(2 ln n))
  double small_mhr_threshold = 0.0;   // E[D_{n^c:n^c}] / (18 sqrt(2 c ln n))
  double medium_threshold = 0.0;      // E[D_{n^c:n^c}] / (18 c sqrt(2 ln n))
  double large_threshold = 0.0;       // E[D_{cn:cn}] sqrt(ln n) / ln(cn)

  bool small_noise = false;
  bool small_noise_mhr = false;  // reported only when mhr is true
  bool medium_noise = false;
  bool large_noise = false;
  // ln(cn) degenerates for cn < 3; the large-noise flag is then meaningless.
  bool large_noise_classifiable = true;
};

RegimeReport classify(const RewardDistribution& dist, std::size_t n, double c,
                      const NoiseProfile& profile);

struct NaiveAdversaryOverrides {
  std::optional<std::size_t> noisy_count;  // default round(6 ln n)
  std::optional<double> sigma_big;         // default 6 beta_{n^2}(D_{n:n}) sqrt(ln n)
};

struct LinearAdversaryOverrides {
  std::optional<std::size_t> small_count;   // default round(n^(1/5626))
  std::optional<double> alpha_exponent;     // subscript n^e in the sigma_big formula; default 1/10000
  std::optional<double> sigma_small;        // default (37/(9 sqrt 2)) E[D_{cs:cs}] / sqrt(ln n)
  std::optional<double> sigma_big;          // default 6 alpha_{n^e}(D_{n-cs:n-cs}) sqrt(ln n)
};

struct AdversarialConstruction {
  std::string kind;  // "naive_adversary" | "linear_adversary"
  std::size_t n = 0;

  // Parameters as used (after defaults/overrides).
  std::size_t noisy_count = 0;  // naive: big boxes; linear: small boxes
  double sigma_small = 0.0;     // linear only
  double sigma_big = 0.0;
  double theta_star = 0.0;      // linear only: sqrt(ln n / 2)
  double beta_used = 0.0;       // naive only: beta_{n^2} of the max law
  double alpha_used = 0.0;      // linear only: the alpha quantile in sigma_big

  // Echo of the caller's overrides, bit-for-bit.
  NaiveAdversaryOverrides naive_overrides;
  LinearAdversaryOverrides linear_overrides;

  NoiseProfile profile;
};

// n - round(6 ln n) exact boxes followed by round(6 ln n) boxes at sigma_b.
AdversarialConstruction construct_naive_adversary(const RewardDistribution& dist, std::size_t n,
                                                  const NaiveAdversaryOverrides& ov = {});

// One exact box, c_s small-noise boxes, the rest at large noise; requires an
// MHR distribution.  Enforces sigma_b > theta* sigma_s.
AdversarialConstruction construct_linear_adversary(const RewardDistribution& dist, std::size_t n,
                                                   const LinearAdversaryOverrides& ov = {});

}  // namespace boxlab
