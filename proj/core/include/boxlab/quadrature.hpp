#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <queue>
#include <vector>

#include "boxlab/errors.hpp"

namespace boxlab {

// Adaptive Gauss-Kronrod (G7, K15) panel integration.  The error estimate of
// each panel is the usual |K15 - G7| heuristic; panels are split worst-first
// until the summed estimate meets the requested tolerance.

namespace gk {

// 15-point Kronrod nodes on [-1, 1] (symmetric; only the non-negative half).
inline constexpr double kNodes[8] = {
    0.0000000000000000000, 0.2077849550078984676, 0.4058451513773971669,
    0.5860872354676911303, 0.7415311855993944399, 0.8648644233597690727,
    0.9491079123427585245, 0.9914553711208126392};
inline constexpr double kWeights[8] = {
    0.2094821410847278280, 0.2044329400752988924, 0.1903505780647854099,
    0.1690047266392679028, 0.1406532597155259187, 0.1047900103222501838,
    0.0630920926299785533, 0.0229353220105292250};
// Embedded 7-point Gauss weights (nodes 1, 3, 5, 7 of the half-list).
inline constexpr double kGaussWeights[4] = {
    0.4179591836734693878, 0.3818300505051189450, 0.2797053914892766679,
    0.1294849661688696933};

template <std::invocable<double> F>
void panel(const F& f, double a, double b, double& value, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fk[15];
  fk[7] = f(mid);
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kNodes[i];
    fk[7 - i] = f(mid - dx);
    fk[7 + i] = f(mid + dx);
  }
  double kron = kWeights[0] * fk[7];
  for (int i = 1; i < 8; ++i) kron += kWeights[i] * (fk[7 - i] + fk[7 + i]);
  double gauss = kGaussWeights[0] * fk[7];
  for (int i = 1; i < 4; ++i) gauss += kGaussWeights[i] * (fk[7 - 2 * i] + fk[7 + 2 * i]);
  value = kron * half;
  err = std::abs((kron - gauss) * half);
}

}  // namespace gk

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

// Integrates f over [a, b]; the iteration stops once the accumulated error
// estimate drops below max(abs_tol, rel_tol * |value|).
template <std::invocable<double> F>
QuadratureResult integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-10, std::size_t max_panels = 2000) {
  if (!(b > a)) return {0.0, 0.0, true};

  struct Interval {
    double a, b, value, err;
    bool operator<(const Interval& o) const { return err < o.err; }
  };

  std::priority_queue<Interval> heap;
  double total = 0.0, total_err = 0.0;
  auto push = [&](double lo, double hi) {
    Interval iv{lo, hi, 0.0, 0.0};
    gk::panel(f, lo, hi, iv.value, iv.err);
    total += iv.value;
    total_err += iv.err;
    heap.push(iv);
  };
  push(a, b);

  std::size_t panels = 1;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) && panels < max_panels) {
    Interval worst = heap.top();
    heap.pop();
    total -= worst.value;
    total_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval at double resolution
      total += worst.value;
      total_err += worst.err;
      break;
    }
    push(worst.a, mid);
    push(mid, worst.b);
    ++panels;
  }

  QuadratureResult out;
  out.value = total;
  out.error = total_err;
  out.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total)) ||
                  total_err <= 1e-14 * (std::abs(total) + 1.0);
  return out;
}

}  // namespace boxlab
