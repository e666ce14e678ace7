#include "boxlab/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "boxlab/errors.hpp"
#include "boxlab/normal.hpp"
#include "boxlab/quadrature.hpp"

namespace boxlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailCutoff = 1e-14;  // stop extending once a panel adds less than this fraction

double nearest_atom(const std::vector<Atom>& atoms, double y) {
  double best = atoms.front().value;
  for (const auto& a : atoms)
    if (std::abs(a.value - y) < std::abs(best - y)) best = a.value;
  return best;
}

PosteriorResult atom_posterior(const std::vector<Atom>& atoms, double sigma, double y) {
  if (atoms.empty()) throw std::invalid_argument("posterior: conditioning removed all support");
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  double max_lw = -kInf;
  std::vector<double> lw(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double d = atoms[i].value - y;
    lw[i] = std::log(atoms[i].prob) - d * d * inv2s2;
    max_lw = std::max(max_lw, lw[i]);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double w = std::exp(lw[i] - max_lw);
    den += w;
    num += atoms[i].value * w;
  }
  return {num / den, false};
}

struct ContinuousPosterior {
  const RewardDistribution& dist;
  double sigma, y, rel_tol;
  double lo, hi;      // integration support (cap applied)
  double anchor;      // support point nearest y; the exponent shift point
  double num = 0.0, den = 0.0;

  ContinuousPosterior(const RewardDistribution& d, double cap, double s, double obs, double tol)
      : dist(d), sigma(s), y(obs), rel_tol(tol) {
    lo = dist.support_lo();
    hi = std::min(dist.support_hi(), cap);
    if (!(hi >= lo)) throw std::invalid_argument("posterior: empty truncated support");
    anchor = std::clamp(y, lo, std::isfinite(hi) ? hi : std::max(lo, y));
  }

  double weight(double x) const {
    const double dy = x - y;
    const double da = anchor - y;
    const double delta = (dy * dy - da * da) / (2.0 * sigma * sigma);
    if (delta > 745.0) return 0.0;
    return dist.density(x) * std::exp(-delta);
  }

  void add_panel(double a, double b) {
    if (!(b > a)) return;
    const double tol = 0.1 * rel_tol;
    auto d = integrate([this](double x) { return weight(x); }, a, b, 0.0, tol, 400);
    auto n = integrate([this](double x) { return x * weight(x); }, a, b, 0.0, tol, 400);
    den += d.value;
    num += n.value;
    last_den = d.value;
    last_num = n.value;
  }

  double last_den = 0.0, last_num = 0.0;

  bool panel_negligible() const {
    return last_den <= kTailCutoff * den && std::abs(last_num) <= kTailCutoff * std::abs(num);
  }

  // Characteristic width of the shifted integrand near the anchor.
  double local_scale() const {
    const double drift = std::abs(y - anchor);
    const double gauss_scale = sigma * sigma / std::max(drift, sigma);
    const double prior_scale =
        std::max(dist.quantile(0.75) - dist.quantile(0.25), 1e-3 * (1.0 + std::abs(anchor)));
    return std::max(std::min(gauss_scale, prior_scale), 1e-300);
  }

  PosteriorResult run() {
    double wlo = std::max(lo, y - 10.0 * sigma);
    double whi = std::isfinite(hi) ? std::min(hi, y + 10.0 * sigma) : y + 10.0 * sigma;
    if (wlo > whi) wlo = whi = anchor;  // observation outside the support window

    const double h0 = local_scale();

    // Ladder of geometrically growing panels out from the anchor, so narrow
    // posteriors are never skipped inside a wide window.
    std::vector<double> cuts{anchor};
    for (double h = h0, x = anchor; x < whi && cuts.size() < 400;) {
      x = std::min(x + h, whi);
      cuts.push_back(x);
      h *= 2.0;
    }
    std::vector<double> down{};
    for (double h = h0, x = anchor; x > wlo && down.size() < 400;) {
      x = std::max(x - h, wlo);
      down.push_back(x);
      h *= 2.0;
    }
    std::reverse(down.begin(), down.end());
    down.insert(down.end(), cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < down.size(); ++i) add_panel(down[i], down[i + 1]);

    // Adaptive extension while the tail mass still matters.
    double h = std::max(h0, 0.25 * (whi - wlo));
    double edge = whi;
    for (int k = 0; k < 200 && edge < hi; ++k) {
      const double next = std::isfinite(hi) ? std::min(hi, edge + h) : edge + h;
      add_panel(edge, next);
      edge = next;
      h *= 2.0;
      if (den > 0.0 && panel_negligible()) break;
    }
    h = std::max(h0, 0.25 * (whi - wlo));
    edge = wlo;
    for (int k = 0; k < 200 && edge > lo; ++k) {
      const double next = std::max(lo, edge - h);
      add_panel(next, edge);
      edge = next;
      h *= 2.0;
      if (den > 0.0 && panel_negligible()) break;
    }

    if (!(den > 0.0) || !std::isfinite(num / den)) return {anchor, true};
    return {num / den, false};
  }
};

PosteriorResult posterior_with_cap(const RewardDistribution& dist, double cap, double sigma,
                                   double y, double rel_tol) {
  if (sigma < 0.0 || !std::isfinite(sigma)) throw std::invalid_argument("posterior: bad sigma");
  if (!std::isfinite(y)) throw std::invalid_argument("posterior: bad observation");

  if (!dist.has_density()) {
    auto atoms = dist.atoms();
    std::erase_if(atoms, [&](const Atom& a) { return a.value > cap; });
    if (atoms.empty()) throw std::invalid_argument("posterior: Pr[D <= cap] is zero");
    if (sigma == 0.0) {
      for (const auto& a : atoms)
        if (std::abs(a.value - y) <= 1e-12 * std::max(1.0, std::abs(a.value))) return {a.value, false};
      throw std::invalid_argument("posterior: sigma = 0 with y outside the support");
    }
    auto res = atom_posterior(atoms, sigma, y);
    if (!std::isfinite(res.value)) return {nearest_atom(atoms, y), true};
    return res;
  }

  const double lo = dist.support_lo();
  const double hi = std::min(dist.support_hi(), cap);
  if (sigma == 0.0) {
    const double slack = 1e-12 * std::max(1.0, std::abs(y));
    if (y < lo - slack || y > hi + slack)
      throw std::invalid_argument("posterior: sigma = 0 with y outside the support");
    return {std::clamp(y, lo, hi), false};
  }
  ContinuousPosterior engine(dist, cap, sigma, y, rel_tol);
  return engine.run();
}

}  // namespace

PosteriorResult posterior_mean(const PosteriorQuery& query) {
  return posterior_with_cap(query.dist, kInf, query.sigma, query.y, query.rel_tol);
}

PosteriorResult truncated_posterior_mean(const RewardDistribution& dist, double cap, double sigma,
                                         double y) {
  if (!(cap > 0.0)) throw std::invalid_argument("truncated_posterior_mean: cap must be > 0");
  if (dist.cdf(cap) <= 0.0)
    throw std::invalid_argument("truncated_posterior_mean: Pr[D <= cap] is zero");
  if (!(sigma > 0.0)) throw std::invalid_argument("truncated_posterior_mean: sigma must be > 0");
  return posterior_with_cap(dist, cap, sigma, y, 1e-8);
}

double posterior_mean_halfnormal(double sigma, double y) {
  if (!(sigma > 0.0)) throw std::invalid_argument("posterior_mean_halfnormal: sigma must be > 0");
  const double lam = std::sqrt(sigma * sigma + 1.0);
  const double t = -y / (sigma * lam);
  return y / (sigma * sigma + 1.0) + mills_ratio(t) * sigma / lam;
}

double halfnormal_posterior(double scale, double sigma, double y) {
  if (!(scale > 0.0)) throw std::invalid_argument("halfnormal_posterior: scale must be > 0");
  return scale * posterior_mean_halfnormal(sigma / scale, y / scale);
}

double posterior_upper_bound_halfnormal(double sigma, double y) {
  if (sigma < 0.0) throw std::invalid_argument("posterior_upper_bound_halfnormal: sigma >= 0");
  return kSqrt2OverPi + std::max(0.0, y / (sigma * sigma + 1.0));
}

}  // namespace boxlab
