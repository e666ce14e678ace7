#include "boxlab/regimes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "boxlab/errors.hpp"
#include "boxlab/order_stats.hpp"

namespace boxlab {

namespace {

std::size_t clamp_pivot(double raw, std::size_t n) {
  if (raw < 1.0) return 1;
  if (raw > static_cast<double>(n)) return n;
  return static_cast<std::size_t>(std::llround(raw));
}

}  // namespace

RegimeReport classify(const RewardDistribution& dist, std::size_t n, double c,
                      const NoiseProfile& profile) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("classify: c must be in (0,1]");
  if (profile.size() != n) throw std::invalid_argument("classify: profile size != n");
  if (n < 2) throw std::invalid_argument("classify: need n >= 2");

  RegimeReport r;
  r.n = n;
  r.c = c;
  r.mhr = mhr_verdict(dist);

  const double ln_n = std::log(static_cast<double>(n));
  r.pivot_cn = clamp_pivot(c * static_cast<double>(n), n);
  r.pivot_nc = clamp_pivot(std::pow(static_cast<double>(n), c), n);
  r.sigma_at_cn = profile.sigma(r.pivot_cn - 1);
  r.sigma_at_nc = profile.sigma(r.pivot_nc - 1);

  const double e_cn = expected_max(dist, r.pivot_cn);
  const double e_nc = expected_max(dist, r.pivot_nc);

  r.small_threshold = e_cn / (5.0 * std::sqrt(2.0 * ln_n));
  r.small_mhr_threshold = e_nc / (18.0 * std::sqrt(2.0 * c * ln_n));
  r.medium_threshold = e_nc / (18.0 * c * std::sqrt(2.0 * ln_n));

  r.small_noise = r.sigma_at_cn <= r.small_threshold;
  r.small_noise_mhr = r.mhr && r.sigma_at_nc <= r.small_mhr_threshold;
  r.medium_noise = r.sigma_at_nc > r.medium_threshold;

  const double cn = c * static_cast<double>(n);
  if (cn < 3.0) {
    r.large_noise_classifiable = false;
    r.large_noise = false;
    r.large_threshold = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.large_threshold = e_cn * std::sqrt(ln_n) / std::log(cn);
    r.large_noise = r.sigma_at_cn > r.large_threshold;
  }
  return r;
}

AdversarialConstruction construct_naive_adversary(const RewardDistribution& dist, std::size_t n,
                                                  const NaiveAdversaryOverrides& ov) {
  if (n < 2) throw std::invalid_argument("construct_naive_adversary: need n >= 2");
  const double ln_n = std::log(static_cast<double>(n));
  const std::size_t c_b =
      ov.noisy_count ? *ov.noisy_count : static_cast<std::size_t>(std::llround(6.0 * ln_n));
  if (c_b >= n) {
    std::ostringstream os;
    os << "construct_naive_adversary: round(6 ln n) = " << c_b << " >= n = " << n
       << "; construction undefined at this scale";
    throw std::invalid_argument(os.str());
  }
  if (c_b < 1) throw std::invalid_argument("construct_naive_adversary: noisy_count must be >= 1");

  const MaxLaw max_law(dist, n);
  const double beta = beta_threshold(max_law, static_cast<double>(n) * static_cast<double>(n));
  const double sigma_big = ov.sigma_big ? *ov.sigma_big : 6.0 * beta * std::sqrt(ln_n);

  std::vector<double> sigma(n, 0.0);
  for (std::size_t i = n - c_b; i < n; ++i) sigma[i] = sigma_big;

  AdversarialConstruction out{.kind = "naive_adversary",
                              .n = n,
                              .noisy_count = c_b,
                              .sigma_small = 0.0,
                              .sigma_big = sigma_big,
                              .theta_star = 0.0,
                              .beta_used = beta,
                              .alpha_used = 0.0,
                              .naive_overrides = ov,
                              .linear_overrides = {},
                              .profile = NoiseProfile(std::move(sigma))};
  return out;
}

AdversarialConstruction construct_linear_adversary(const RewardDistribution& dist, std::size_t n,
                                                   const LinearAdversaryOverrides& ov) {
  if (n < 3) throw std::invalid_argument("construct_linear_adversary: need n >= 3");
  if (!mhr_verdict(dist))
    throw std::invalid_argument("construct_linear_adversary: " + dist.describe() +
                                " failed the MHR grid check");
  const double ln_n = std::log(static_cast<double>(n));
  const std::size_t c_s =
      ov.small_count
          ? *ov.small_count
          : std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(std::pow(n, 1.0 / 5626.0))));
  if (c_s + 2 > n) {
    std::ostringstream os;
    os << "construct_linear_adversary: c_s + 2 = " << (c_s + 2) << " > n = " << n;
    throw std::invalid_argument(os.str());
  }

  const double sigma_small =
      ov.sigma_small ? *ov.sigma_small
                     : (37.0 / (9.0 * std::numbers::sqrt2)) * expected_max(dist, c_s) /
                           std::sqrt(ln_n);

  const double exponent = ov.alpha_exponent ? *ov.alpha_exponent : 1.0 / 10000.0;
  const double subscript = std::pow(static_cast<double>(n), exponent);
  if (!(subscript > 1.0))
    throw std::invalid_argument("construct_linear_adversary: alpha subscript n^e must exceed 1");
  const MaxLaw rest_law(dist, n - c_s);
  const double alpha = alpha_quantile(rest_law, subscript);
  const double sigma_big = ov.sigma_big ? *ov.sigma_big : 6.0 * alpha * std::sqrt(ln_n);

  const double theta_star = std::sqrt(ln_n / 2.0);
  if (!(sigma_big > theta_star * sigma_small)) {
    std::ostringstream os;
    os << "construct_linear_adversary: sigma_b = " << sigma_big
       << " must exceed theta* sigma_s = " << theta_star * sigma_small;
    throw NumericalError(os.str());
  }

  std::vector<double> sigma(n, sigma_big);
  sigma[0] = 0.0;
  for (std::size_t i = 1; i <= c_s; ++i) sigma[i] = sigma_small;

  AdversarialConstruction out{.kind = "linear_adversary",
                              .n = n,
                              .noisy_count = c_s,
                              .sigma_small = sigma_small,
                              .sigma_big = sigma_big,
                              .theta_star = theta_star,
                              .beta_used = 0.0,
                              .alpha_used = alpha,
                              .naive_overrides = {},
                              .linear_overrides = ov,
                              .profile = NoiseProfile(std::move(sigma))};
  return out;
}

}  // namespace boxlab
