#pragma once

// Test-side oracles, independent of the library's quadrature path: composite
// Simpson integration on a fixed fine grid, plus reference constants computed
// with 30-digit arithmetic and frozen here.

#include <cmath>
#include <functional>

namespace oracle {

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// E[max of m iid draws] = int 1 - F^m over [0, hi].
inline double expected_max_simpson(const std::function<double(double)>& cdf, double m, double hi) {
  return simpson([&](double x) { return 1.0 - std::pow(cdf(x), m); }, 0.0, hi);
}

// Frozen reference values (30-digit evaluation of the defining integrals).
inline constexpr double kHalfNormalMean = 0.79788456080286536;          // sqrt(2/pi)
inline constexpr double kHalfNormalMax2 = 1.1283791670955126;
inline constexpr double kHalfNormalMax8 = 1.7833670778813632;
inline constexpr double kHalfNormalMax64 = 2.5961107651466503;
inline constexpr double kHalfNormalMax250 = 3.0370302092801915;
inline constexpr double kBetaExpM10 = 3.8897201698674291;               // root of (x+1)e^-x = 1/10
inline constexpr double kPosteriorHalfNormS1Y0 = 0.56418958354775629;   // 1/sqrt(pi)
inline constexpr double kPosteriorHalfNormS1Y1 = 0.78897818137263137;
inline constexpr double kPosteriorHalfNormS2Y10 = 2.0296659411560274;
inline constexpr double kPosteriorHalfNormS01Y1 = 0.9900990099009901;
inline constexpr double kPosteriorExpS1Y0 = 0.52513527616098121;
inline constexpr double kPosteriorExpS1Y2 = 1.2875999709391784;
inline constexpr double kPosteriorExpS3Y0 = 0.84929596479130952;
inline constexpr double kPhi1 = 0.84134474606854295;
inline constexpr double kPhiHalf = 0.6914624612740131;
inline constexpr double kPdf1 = 0.24197072451914335;
inline constexpr double kHarmonic100 = 5.1873775176396203;

}  // namespace oracle
