#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "boxlab/errors.hpp"
#include "boxlab/normal.hpp"
#include "boxlab/order_stats.hpp"
#include "boxlab/posterior.hpp"
#include "boxlab/simlab.hpp"

namespace boxlab {

namespace {

constexpr double kDeterministicSlack = 1e-9;

std::string describe_point(const RewardDistribution& dist, const std::string& rest) {
  return dist.describe() + (rest.empty() ? "" : ", " + rest);
}

LemmaCheckResult make_result(std::string lemma, std::string point, double lhs, double rhs,
                             std::string method, double slack) {
  LemmaCheckResult r;
  r.lemma = std::move(lemma);
  r.point = std::move(point);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.pass = lhs <= rhs + slack;
  r.method = std::move(method);
  return r;
}

// Tracks the worst (smallest-margin) point of a grid so one result line
// summarizes the whole sweep.
struct WorstCase {
  double lhs = 0.0, rhs = 0.0, margin = std::numeric_limits<double>::infinity();
  std::string point;
  bool seen = false;

  void offer(double l, double r, const std::string& p) {
    if (!seen || r - l < margin) {
      lhs = l;
      rhs = r;
      margin = r - l;
      point = p;
      seen = true;
    }
  }
};

using Sink = std::vector<LemmaCheckResult>;
using Check = std::function<void(const LemmaParams&, Sink&)>;

void check_gordon(const LemmaParams&, Sink& out) {
  WorstCase low, high;
  for (int i = 1; i <= 10000; ++i) {
    const double t = 10.0 * static_cast<double>(i) / 10000.0;
    const auto b = gordon_bounds(t);
    const double phi_t = normal_cdf(t);
    std::ostringstream os;
    os << "t=" << t;
    low.offer(b.lower, phi_t, os.str());
    high.offer(phi_t, b.upper, os.str());
  }
  out.push_back(make_result("gordon", "lower side, worst at " + low.point, low.lhs, low.rhs,
                            "exact", kDeterministicSlack));
  out.push_back(make_result("gordon", "upper side, worst at " + high.point, high.lhs, high.rhs,
                            "exact", kDeterministicSlack));
}

void check_compare_order_stats(const LemmaParams& params, Sink& out) {
  for (const auto& dist : params.dists) {
    std::vector<std::size_t> ms{1};
    while (ms.back() < 1024) ms.push_back(ms.back() * 2);
    std::vector<double> e(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) e[i] = expected_max(dist, ms[i]);
    WorstCase worst;
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (std::size_t j = i + 1; j < ms.size(); ++j) {
        std::ostringstream os;
        os << "a=" << ms[i] << ", b=" << ms[j];
        worst.offer(e[j] / static_cast<double>(ms[j]), e[i] / static_cast<double>(ms[i]),
                    os.str());
      }
    out.push_back(make_result("compare-order-stats", describe_point(dist, worst.point), worst.lhs,
                              worst.rhs, "quadrature", kDeterministicSlack));
  }
}

void check_mhr_max_concentration(const LemmaParams& params, Sink& out) {
  std::size_t point_idx = 0;
  for (const auto& dist : params.dists) {
    for (const std::size_t n : params.n_grid) {
      if (n < 4) continue;
      const MaxLaw law(dist, n);
      const double twice_mean = 2.0 * law.mean();
      SplitMix64 rng = substream(params.seed, 101, point_idx++);
      std::uint64_t below = 0;
      for (std::uint64_t s = 0; s < params.mc_samples; ++s)
        if (law.sample(rng) < twice_mean) ++below;
      const double n_samples = static_cast<double>(params.mc_samples);
      const double p_hat = static_cast<double>(below) / n_samples;
      const double se = std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / n_samples);
      const double bound = 1.0 - std::pow(static_cast<double>(n), -0.6);
      std::ostringstream os;
      os << "n=" << n << ", Pr[max < 2 E[max]]";
      std::ostringstream method;
      method << "monte-carlo(" << params.mc_samples << ")";
      out.push_back(make_result("mhr-max-concentration", describe_point(dist, os.str()),
                                bound - 3.0 * se, p_hat, method.str(), 0.0));
    }
  }
}

void check_order_stat_vs_quantile(const LemmaParams& params, Sink& out) {
  for (const auto& dist : params.dists) {
    WorstCase low, high;
    for (const std::size_t n : params.n_grid) {
      if (n < 4) continue;
      const double e_max = expected_max(dist, n);
      const double alpha = alpha_quantile(dist, static_cast<double>(n));
      std::ostringstream os;
      os << "n=" << n;
      low.offer(e_max / 3.0, alpha, os.str());
      high.offer(alpha, 1.25 * e_max, os.str());
    }
    out.push_back(make_result("order-stat-vs-quantile",
                              describe_point(dist, "lower, worst at " + low.point), low.lhs,
                              low.rhs, "quadrature", kDeterministicSlack));
    out.push_back(make_result("order-stat-vs-quantile",
                              describe_point(dist, "upper, worst at " + high.point), high.lhs,
                              high.rhs, "quadrature", kDeterministicSlack));
  }
}

void check_cai_daskalakis_alpha(const LemmaParams& params, Sink& out) {
  const double ds[] = {1.0, 1.25, 1.5, 2.0, 3.0};
  for (const auto& dist : params.dists) {
    WorstCase worst;
    for (double m = 2.0; m <= 128.0; m *= 2.0) {
      for (const double d : ds) {
        const double lhs = alpha_quantile(dist, std::pow(m, d));
        const double rhs = d * alpha_quantile(dist, m);
        std::ostringstream os;
        os << "m=" << m << ", d=" << d;
        worst.offer(lhs, rhs, os.str());
      }
    }
    out.push_back(make_result("cai-daskalakis-alpha", describe_point(dist, worst.point), worst.lhs,
                              worst.rhs, "exact", kDeterministicSlack));
  }
}

void check_order_stat_order_stat(const LemmaParams& params, Sink& out) {
  const double as[] = {1.0, 1.5, 2.0};
  for (const auto& dist : params.dists) {
    WorstCase worst;
    for (const std::size_t n : params.n_grid) {
      if (n < 4) continue;
      for (const double a : as) {
        const auto m = static_cast<std::size_t>(
            std::llround(std::pow(static_cast<double>(n), a)));
        const double lhs = expected_max(dist, m);
        const double rhs = 4.0 * a * expected_max(dist, n);
        std::ostringstream os;
        os << "n=" << n << ", a=" << a;
        worst.offer(lhs, rhs, os.str());
      }
    }
    out.push_back(make_result("order-stat-order-stat", describe_point(dist, worst.point),
                              worst.lhs, worst.rhs, "quadrature", kDeterministicSlack));
  }
}

void check_order_stat_mean(const LemmaParams& params, Sink& out) {
  for (const auto& dist : params.dists) {
    WorstCase worst;
    for (const std::size_t n : params.n_grid) {
      std::ostringstream os;
      os << "n=" << n;
      worst.offer(expected_max(dist, n),
                  (std::log(static_cast<double>(n)) + 1.0) * dist.mean(), os.str());
    }
    out.push_back(make_result("order-stat-mean", describe_point(dist, worst.point), worst.lhs,
                              worst.rhs, "quadrature", kDeterministicSlack));
  }
}

void check_half_norm_order_stats(const LemmaParams& params, Sink& out) {
  for (const double s : {1.0, 2.5}) {
    const auto dist = RewardDistribution::half_normal(s);
    const double mean_err = std::abs(dist.mean() - s * kSqrt2OverPi);
    out.push_back(make_result("half-norm-order-stats", dist.describe() + ", mean = s sqrt(2/pi)",
                              mean_err, 1e-12, "exact", 0.0));
    WorstCase low, high;
    for (const std::size_t n : params.n_grid) {
      if (n < 8) continue;
      const double e_max = expected_max(dist, n);
      const double root = std::sqrt(std::log(static_cast<double>(n)));
      std::ostringstream os;
      os << "n=" << n;
      low.offer(0.8 * s * root, e_max, os.str());
      high.offer(e_max, 3.0 * std::numbers::sqrt2 * s * root, os.str());
    }
    out.push_back(make_result("half-norm-order-stats",
                              describe_point(dist, "lower, worst at " + low.point), low.lhs,
                              low.rhs, "quadrature", kDeterministicSlack));
    out.push_back(make_result("half-norm-order-stats",
                              describe_point(dist, "upper, worst at " + high.point), high.lhs,
                              high.rhs, "quadrature", kDeterministicSlack));
  }
}

void check_posterior_monotonicity(const LemmaParams&, Sink& out) {
  const RewardDistribution dists[] = {
      RewardDistribution::exponential(1.0), RewardDistribution::half_normal(1.0),
      RewardDistribution::uniform(0.0, 1.0), RewardDistribution::two_point(2.0, 0.5)};
  for (const auto& dist : dists) {
    for (const double sigma : {0.1, 1.0, 10.0}) {
      const double lo = -2.0 * sigma;
      const double hi = (dist.has_density() ? dist.quantile(0.99) : dist.support_hi()) +
                        2.0 * sigma;
      constexpr int kPoints = 200;
      double prev = 0.0, scale = 0.0;
      WorstCase worst;
      for (int i = 0; i < kPoints; ++i) {
        const double y = lo + (hi - lo) * static_cast<double>(i) / (kPoints - 1);
        const double v = posterior_mean({dist, sigma, y}).value;
        scale = std::max(scale, std::abs(v));
        if (i > 0) {
          std::ostringstream os;
          os << "sigma=" << sigma << ", y=" << y;
          worst.offer(prev, v + 1e-7 * std::max(scale, 1.0), os.str());
        }
        prev = v;
      }
      out.push_back(make_result("posterior-monotonicity", describe_point(dist, worst.point),
                                worst.lhs, worst.rhs, "quadrature", 0.0));
    }
  }
}

void check_posterior_closed_form(const LemmaParams&, Sink& out) {
  const auto dist = RewardDistribution::half_normal(1.0);
  WorstCase worst;
  for (const double sigma : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    for (double y = -10.0; y <= 10.0 + 1e-9; y += 0.25) {
      const double closed = posterior_mean_halfnormal(sigma, y);
      const double quad = posterior_mean({dist, sigma, y}).value;
      std::ostringstream os;
      os << "sigma=" << sigma << ", y=" << y;
      worst.offer(std::abs(closed - quad), 1e-6, os.str());
    }
  }
  out.push_back(make_result("posterior-closed-form", "half_normal(1), worst at " + worst.point,
                            worst.lhs, worst.rhs, "quadrature", 0.0));
}

void check_posterior_u_bound(const LemmaParams&, Sink& out) {
  WorstCase worst;
  for (const double sigma : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    for (double y = -10.0; y <= 10.0 + 1e-9; y += 0.25) {
      std::ostringstream os;
      os << "sigma=" << sigma << ", y=" << y;
      worst.offer(posterior_mean_halfnormal(sigma, y), posterior_upper_bound_halfnormal(sigma, y),
                  os.str());
    }
  }
  out.push_back(make_result("posterior-U-bound", "half_normal(1), worst at " + worst.point,
                            worst.lhs, worst.rhs, "exact", kDeterministicSlack));
}

void check_bounded_posterior(const LemmaParams& params, Sink& out) {
  for (const auto& dist : params.dists) {
    WorstCase worst;
    for (const double cap : {0.5, 1.0, 2.0}) {
      const double mass = dist.cdf(cap);
      if (!(mass > 0.0)) continue;
      // E[Z] for Z = D | D <= cap.
      const double tail_part = cap * (1.0 - dist.cdf(cap)) + dist.tail_integral(cap);
      const double mean_z = (dist.mean() - tail_part) / mass;
      for (const double factor : {2.5, 3.0, 5.0}) {
        const double sigma = factor * cap;
        const double y_max = sigma * sigma / (2.0 * cap);
        for (int i = 0; i < 8; ++i) {
          const double y = -sigma + (y_max + sigma) * static_cast<double>(i) / 7.0;
          const double lhs = truncated_posterior_mean(dist, cap, sigma, y).value;
          std::ostringstream os;
          os << "V=" << cap << ", sigma=" << sigma << ", y=" << y;
          worst.offer(lhs, 2.0 * mean_z, os.str());
        }
      }
    }
    out.push_back(make_result("bounded-posterior", describe_point(dist, worst.point), worst.lhs,
                              worst.rhs, "quadrature", kDeterministicSlack));
  }
}

void check_tail_product(const LemmaParams& params, Sink& out) {
  for (const auto& dist : params.dists) {
    WorstCase worst;
    for (const std::size_t n : {std::size_t{4}, std::size_t{16}, std::size_t{64},
                                std::size_t{256}}) {
      if (n > *std::max_element(params.n_grid.begin(), params.n_grid.end())) continue;
      const MaxLaw law(dist, n);
      for (const double m : {2.0, 4.0, 16.0, 64.0}) {
        const double alpha = alpha_quantile(law, m);
        const double lhs = alpha * (1.0 - law.cdf(alpha)) + law.tail_integral(alpha);
        const double rhs = 15.0 *
                           (std::log(m) + std::log(static_cast<double>(n)) + 1.0) * dist.mean() /
                           (2.0 * m);
        std::ostringstream os;
        os << "n=" << n << ", m=" << m;
        worst.offer(lhs, rhs, os.str());
      }
    }
    out.push_back(make_result("tail-product", describe_point(dist, worst.point), worst.lhs,
                              worst.rhs, "quadrature", kDeterministicSlack));
  }
}

void check_barlow_quantile(const LemmaParams& params, Sink& out) {
  const double one_minus_inv_e = 1.0 - 1.0 / std::numbers::e;
  for (const auto& dist : params.dists) {
    WorstCase low, high;
    for (double p = 0.05; p < one_minus_inv_e; p += 0.05) {
      const double zeta = dist.quantile(p);
      const double mu = dist.mean();
      std::ostringstream os;
      os << "p=" << p;
      low.offer(-std::log1p(-p) * mu, zeta, os.str());
      high.offer(zeta, -std::log1p(-p) / p * mu, os.str());
    }
    out.push_back(make_result("barlow-quantile", describe_point(dist, "lower, worst at " + low.point),
                              low.lhs, low.rhs, "exact", kDeterministicSlack));
    out.push_back(make_result("barlow-quantile", describe_point(dist, "upper, worst at " + high.point),
                              high.lhs, high.rhs, "exact", kDeterministicSlack));
  }
}

void check_event_probabilities(const LemmaParams&, Sink& out) {
  // Construction events are pure Gaussian statements; evaluated where the
  // construction is defined.
  for (const std::size_t n : {std::size_t{64}, std::size_t{256}, std::size_t{1024},
                              std::size_t{4096}}) {
    const double ln_n = std::log(static_cast<double>(n));
    const auto c_b = static_cast<std::int64_t>(std::llround(6.0 * ln_n));
    // Some large-noise eps exceeds beta: Phi(1/(6 sqrt(ln n)))^{c_b} <= 1/n^3.
    const double stay_below = gaussian_max_tail(c_b, 6.0 * std::sqrt(ln_n), 1.0);
    std::ostringstream p1;
    p1 << "n=" << n << ", all big eps below beta";
    out.push_back(make_result("event-probabilities", p1.str(), stay_below,
                              1.0 / std::pow(static_cast<double>(n), 3.0), "exact", 0.0));
    // One large box stays observable: Phi(2 sqrt(ln n)) >= 1 - 1/n^2.
    std::ostringstream p2;
    p2 << "n=" << n << ", big-box eps bounded";
    out.push_back(make_result("event-probabilities", p2.str(),
                              1.0 - 1.0 / (static_cast<double>(n) * static_cast<double>(n)),
                              gaussian_max_tail(1, 1.0, 2.0 * std::sqrt(ln_n)), "exact", 0.0));
    // All big-noise observations bounded for all c < theta*:
    // Phi(theta* + 1)^(n - c_s - 1) <= 1/ln n (paper constants, c_s = 1).
    const double theta = std::sqrt(ln_n / 2.0);
    const double all_below = gaussian_max_tail(static_cast<std::int64_t>(n) - 2, 1.0, theta + 1.0);
    std::ostringstream p3;
    p3 << "n=" << n << ", some big-noise eps clears (theta*+1) sigma_b";
    out.push_back(
        make_result("event-probabilities", p3.str(), all_below, 1.0 / ln_n, "exact", 0.0));
  }
  {
    // Small-noise eps event only bites at asymptotic n (paper constants put
    // c_s = n^(1/5626)); verified in the log domain at ln n = 5e7 with the
    // Gordon upper bound standing in for the Gaussian tail.
    const double big_ln_n = 5e7;
    const double t = std::sqrt(big_ln_n / 2.0) / 37.0;
    const double log_m = big_ln_n / 5626.0;
    const double log_q_upper = -0.5 * t * t - std::log(t * std::sqrt(2.0 * std::numbers::pi));
    const double log_lhs = log_m + log_q_upper;  // log of m * Q(t) >= log(1 - Pr[E1])
    const double log_rhs = -std::log(big_ln_n);
    out.push_back(make_result("event-probabilities",
                              "ln n = 5e7 (log-domain), all small eps below theta* sigma_s / 37",
                              log_lhs, log_rhs, "exact (log-domain, Gordon bound)", 0.0));
  }
}

const std::vector<std::pair<std::string, Check>>& registry() {
  static const std::vector<std::pair<std::string, Check>> table = {
      {"gordon", check_gordon},
      {"compare-order-stats", check_compare_order_stats},
      {"mhr-max-concentration", check_mhr_max_concentration},
      {"order-stat-vs-quantile", check_order_stat_vs_quantile},
      {"cai-daskalakis-alpha", check_cai_daskalakis_alpha},
      {"order-stat-order-stat", check_order_stat_order_stat},
      {"order-stat-mean", check_order_stat_mean},
      {"half-norm-order-stats", check_half_norm_order_stats},
      {"posterior-monotonicity", check_posterior_monotonicity},
      {"posterior-closed-form", check_posterior_closed_form},
      {"posterior-U-bound", check_posterior_u_bound},
      {"bounded-posterior", check_bounded_posterior},
      {"tail-product", check_tail_product},
      {"barlow-quantile", check_barlow_quantile},
      {"event-probabilities", check_event_probabilities},
  };
  return table;
}

}  // namespace

std::vector<std::string> default_lemma_suite() {
  std::vector<std::string> ids;
  ids.reserve(registry().size());
  for (const auto& [id, fn] : registry()) ids.push_back(id);
  return ids;
}

std::vector<LemmaCheckResult> verify_lemmas(std::span<const std::string> ids,
                                            const LemmaParams& params) {
  std::vector<LemmaCheckResult> out;
  for (const auto& id : ids) {
    const auto it = std::find_if(registry().begin(), registry().end(),
                                 [&](const auto& kv) { return kv.first == id; });
    if (it == registry().end()) throw ConfigError("verify_lemmas: unknown check \"" + id + "\"");
    it->second(params, out);
  }
  return out;
}

}  // namespace boxlab
