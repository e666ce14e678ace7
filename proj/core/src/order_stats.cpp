#include "boxlab/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "boxlab/quadrature.hpp"

namespace boxlab {

double harmonic_number(std::size_t m) {
  if (m <= 1u << 21) {
    double h = 0.0;
    for (std::size_t i = m; i >= 1; --i) h += 1.0 / static_cast<double>(i);
    return h;
  }
  // Euler-Maclaurin; error < 1/(120 m^4) at this size.
  const double x = static_cast<double>(m);
  constexpr double kEulerGamma = 0.5772156649015328606;
  return std::log(x) + kEulerGamma + 0.5 / x - 1.0 / (12.0 * x * x);
}

double expected_max(const RewardDistribution& dist, std::size_t m) {
  if (m < 1) throw std::invalid_argument("expected_max: m must be >= 1");
  switch (dist.kind()) {
    case DistKind::exponential:
      return harmonic_number(m) / dist.param(0);
    case DistKind::point_mass:
      return dist.param(0);
    case DistKind::two_point: {
      const double v = dist.param(0), p = dist.param(1);
      if (p >= 1.0) return v;
      return v * -std::expm1(static_cast<double>(m) * std::log1p(-p));
    }
    case DistKind::uniform: {
      const double a = dist.param(0), b = dist.param(1);
      return b - (b - a) / (static_cast<double>(m) + 1.0);
    }
    case DistKind::half_normal:
      return MaxLaw(dist, m).mean();
  }
  return 0.0;
}

HazardProfile hazard_profile(std::span<const double> grid,
                             const std::function<double(double)>& pdf,
                             const std::function<double(double)>& cdf) {
  HazardProfile out;
  out.hazard.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] >= grid[i - 1]))
      throw std::invalid_argument("hazard_profile: grid must be sorted");
    const double f = pdf(grid[i]);
    const double surv = 1.0 - cdf(grid[i]);
    if (!(surv > 0.0) && !(f > 0.0)) {
      out.hazard.push_back(std::numeric_limits<double>::quiet_NaN());
      out.rejected.push_back(i);
      std::ostringstream os;
      os << "hazard undefined at x=" << grid[i] << " (f=0, F=1)";
      out.diagnostics.push_back(os.str());
      continue;
    }
    if (!(surv > 0.0)) {
      out.hazard.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    out.hazard.push_back(f / surv);
  }
  out.monotone = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (double h : out.hazard) {
    if (std::isnan(h)) continue;
    const double slack = 1e-9 * std::max(1.0, std::abs(prev));
    if (h < prev - slack) {
      out.monotone = false;
      break;
    }
    prev = std::max(prev, h);
  }
  return out;
}

HazardProfile hazard_profile(const RewardDistribution& dist, std::span<const double> grid) {
  if (!dist.has_density())
    throw std::invalid_argument("hazard_profile: " + dist.describe() + " has no density");
  return hazard_profile(
      grid, [&](double x) { return dist.density(x); }, [&](double x) { return dist.cdf(x); });
}

bool mhr_verdict(const RewardDistribution& dist) {
  if (!dist.has_density()) return false;
  constexpr std::size_t kPoints = 512;
  const double lo = dist.quantile(1e-4);
  const double hi = dist.quantile(1.0 - 1e-4);
  std::vector<double> grid(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kPoints - 1);
  return hazard_profile(dist, grid).monotone;
}

}  // namespace boxlab
