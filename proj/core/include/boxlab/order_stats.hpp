#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "boxlab/distribution.hpp"
#include "boxlab/errors.hpp"

namespace boxlab {

// E[max of m iid draws] = \int_0^inf (1 - F(x)^m) dx.  Closed forms for the
// exponential (harmonic number), two-point, point-mass and uniform kinds;
// truncated quadrature plus an analytic tail bound otherwise.
double expected_max(const RewardDistribution& dist, std::size_t m);

double harmonic_number(std::size_t m);

// The (1 - 1/m)-quantile.  m may be fractional (subscripts like n^c appear
// in the constructions); requires m > 1.
template <DistributionLike D>
double alpha_quantile(const D& dist, double m) {
  if (!(m > 1.0)) throw std::invalid_argument("alpha_quantile: m must be > 1");
  return dist.quantile(1.0 - 1.0 / m);
}

// Smallest threshold x with E[D; D >= x] <= E[D]/m, located by bisecting the
// non-increasing tail contribution T(x) = x(1 - F(x)) + \int_x (1 - F).
template <DistributionLike D>
double beta_threshold(const D& dist, double m) {
  if (!(m >= 1.0)) throw std::invalid_argument("beta_threshold: m must be >= 1");
  const double total = dist.mean();
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericalError("beta_threshold: distribution must have positive finite mean");
  const double target = total / m;

  auto tail_contribution = [&](double x) { return x * (1.0 - dist.cdf(x)) + dist.tail_integral(x); };

  if (tail_contribution(0.0) <= target) return 0.0;

  double hi = dist.quantile(1.0 - 1e-9);
  for (int grow = 0; grow < 64 && tail_contribution(hi) > target; ++grow)
    hi = hi > 1.0 ? hi * 2.0 : hi + 1.0;
  if (tail_contribution(hi) > target)
    throw NumericalError("beta_threshold: bracket did not capture the target");

  // Invariant: T(lo) > target >= T(hi);  the inf lives in (lo, hi].
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tail_contribution(mid) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

struct HazardProfile {
  std::vector<double> hazard;          // f/(1-F); NaN where rejected
  std::vector<std::size_t> rejected;   // grid indices where the hazard is undefined
  std::vector<std::string> diagnostics;
  bool monotone = false;               // non-decreasing up to relative slack 1e-9
};

// Hazard evaluated pointwise from caller-supplied density/CDF callables.
// This is what tabulated (non-member) laws go through in tests.
HazardProfile hazard_profile(std::span<const double> grid,
                             const std::function<double(double)>& pdf,
                             const std::function<double(double)>& cdf);

HazardProfile hazard_profile(const RewardDistribution& dist, std::span<const double> grid);

// Grid heuristic: 512 points between the 1e-4 and 1-1e-4 quantiles.  Atomic
// kinds have no density and report false.
bool mhr_verdict(const RewardDistribution& dist);

}  // namespace boxlab
