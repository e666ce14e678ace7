#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "boxlab/errors.hpp"

namespace boxlab {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)
inline constexpr double kSqrt2OverPi = 0.7978845608028653559;  // sqrt(2/pi)

inline double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Phi via the complementary error function; absolute error well below 1e-12.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Upper tail 1 - Phi(x), computed without cancellation for large x.
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// phi(t) / (1 - Phi(t)).  Direct evaluation is exact-enough until the tail
// underflows (t ~ 37.5); past that an asymptotic expansion takes over.
inline double mills_ratio(double t) {
  if (t < 37.0) {
    double q = normal_sf(t);
    return normal_pdf(t) / q;
  }
  const double t2 = t * t;
  // 1 - Phi(t) = phi(t)/t * (1 - 1/t^2 + 3/t^4 - 15/t^6 + 105/t^8 - ...)
  const double series = 1.0 - 1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2)
      + 105.0 / (t2 * t2 * t2 * t2);
  return t / series;
}

// Inverse standard-normal CDF: Acklam's rational approximation refined by a
// Halley step against erfc, giving ~1 ulp over (0, 1).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw NumericalError("normal_quantile: p outside (0,1)");
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement.
  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

struct GordonBounds {
  double lower;
  double upper;
};

// Two-sided sandwich on Phi(t): 1 - phi(t)/t <= Phi(t) <= 1 - t*phi(t)/(t^2+1).
inline GordonBounds gordon_bounds(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("gordon_bounds: t must be > 0");
  const double ph = normal_pdf(t);
  return {1.0 - ph / t, 1.0 - t * ph / (t * t + 1.0)};
}

// Pr[max of m iid N(0, sigma^2) <= t] = Phi(t/sigma)^m, in the log domain so
// that m can be large without the power collapsing to 0 or 1 prematurely.
inline double gaussian_max_tail(std::int64_t m, double sigma, double t) {
  if (m < 1) throw std::invalid_argument("gaussian_max_tail: m must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_max_tail: sigma must be > 0");
  const double q = normal_sf(t / sigma);
  if (q >= 1.0) return 0.0;
  return std::exp(static_cast<double>(m) * std::log1p(-q));
}

}  // namespace boxlab
