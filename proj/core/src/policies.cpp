#include "boxlab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "boxlab/errors.hpp"
#include "boxlab/posterior.hpp"

namespace boxlab {

namespace {

std::size_t argmax_prefix(std::span<const double> y, std::size_t k) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (y[i] > y[best]) best = i;
  return best;
}

double empirical_quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(i);
  return v[i] + frac * (v[i + 1] - v[i]);
}

double interp_table(const GammaTable& t, double s) {
  if (t.knots.empty() || t.knots.size() != t.values.size())
    throw std::invalid_argument("gamma table: knots/values mismatch");
  if (s <= t.knots.front()) return t.values.front();
  if (s >= t.knots.back()) return t.values.back();
  auto it = std::upper_bound(t.knots.begin(), t.knots.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - t.knots.begin());
  const double x0 = t.knots[j - 1], x1 = t.knots[j];
  const double f = (s - x0) / (x1 - x0);
  return t.values[j - 1] + f * (t.values[j] - t.values[j - 1]);
}

}  // namespace

double evaluate_gamma(const GammaSpec& spec, const NoiseProfile& profile,
                      std::span<const double> y) {
  double g = 0.0;
  if (const auto* c = std::get_if<GammaConstant>(&spec)) {
    g = c->value;
  } else if (const auto* q = std::get_if<GammaQuantileRule>(&spec)) {
    const double qy = empirical_quantile({y.begin(), y.end()}, q->y_quantile);
    const double qs = empirical_quantile(
        {profile.values().begin(), profile.values().end()}, q->sigma_quantile);
    g = qs > 0.0 ? qy / qs : 0.0;
  } else if (const auto* t = std::get_if<GammaTable>(&spec)) {
    double s = 0.0;
    switch (t->stat) {
      case GammaTable::Stat::mean_y:
        for (double v : y) s += v;
        s /= static_cast<double>(y.size());
        break;
      case GammaTable::Stat::max_y:
        s = *std::max_element(y.begin(), y.end());
        break;
      case GammaTable::Stat::mean_sigma:
        for (double v : profile.values()) s += v;
        s /= static_cast<double>(profile.size());
        break;
      case GammaTable::Stat::max_sigma:
        s = *std::max_element(profile.values().begin(), profile.values().end());
        break;
    }
    g = interp_table(*t, s);
  }
  if (!std::isfinite(g)) {
    std::ostringstream os;
    os << "linear_gamma: gamma evaluated to a non-finite value (" << g << ")";
    throw NumericalError(os.str());
  }
  return g;
}

Policy naive_policy() {
  return {"naive", [](const NoiseProfile&, std::span<const double> y, SplitMix64&) {
            return argmax_prefix(y, y.size());
          }};
}

Policy linear_fixed_policy(double c) {
  std::ostringstream name;
  name << "linear_fixed(c=" << c << ")";
  return {name.str(), [c](const NoiseProfile& profile, std::span<const double> y, SplitMix64&) {
            std::size_t best = 0;
            double best_score = y[0] - c * profile.sigma(0);
            for (std::size_t i = 1; i < y.size(); ++i) {
              const double s = y[i] - c * profile.sigma(i);
              if (s > best_score) {
                best_score = s;
                best = i;
              }
            }
            return best;
          }};
}

Policy linear_gamma_policy(GammaSpec spec) {
  return {"linear_gamma",
          [spec = std::move(spec)](const NoiseProfile& profile, std::span<const double> y,
                                   SplitMix64&) {
            const double g = evaluate_gamma(spec, profile, y);
            std::size_t best = 0;
            double best_score = y[0] - g * profile.sigma(0);
            for (std::size_t i = 1; i < y.size(); ++i) {
              const double s = y[i] - g * profile.sigma(i);
              if (s > best_score) {
                best_score = s;
                best = i;
              }
            }
            return best;
          }};
}

Policy ignore_large_policy(std::optional<double> forced_alpha) {
  return {"ignore_large",
          [forced_alpha](const NoiseProfile&, std::span<const double> y, SplitMix64& rng) {
            const double alpha = forced_alpha ? *forced_alpha : rng.uniform();
            const auto n = static_cast<double>(y.size());
            auto k = static_cast<std::size_t>(std::floor(alpha * n));
            k = std::clamp<std::size_t>(k, 1, y.size());
            return argmax_prefix(y, k);
          }};
}

Policy ignore_large_exp_policy(std::optional<double> forced_alpha) {
  return {"ignore_large_exp",
          [forced_alpha](const NoiseProfile&, std::span<const double> y, SplitMix64& rng) {
            const double alpha = forced_alpha ? *forced_alpha : rng.uniform();
            const auto n = static_cast<double>(y.size());
            auto k = static_cast<std::size_t>(std::floor(std::pow(n, alpha)));
            k = std::clamp<std::size_t>(k, 1, y.size());
            return argmax_prefix(y, k);
          }};
}

Policy opt_policy(RewardDistribution dist) {
  return {"opt", [dist = std::move(dist)](const NoiseProfile& profile, std::span<const double> y,
                                          SplitMix64&) {
            std::size_t best = 0;
            double best_post = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < y.size(); ++i) {
              const double s = profile.sigma(i);
              double post;
              if (s == 0.0) {
                post = y[i];
              } else if (dist.kind() == DistKind::half_normal) {
                post = halfnormal_posterior(dist.param(0), s, y[i]);
              } else if (dist.kind() == DistKind::point_mass) {
                post = dist.param(0);
              } else {
                post = posterior_mean({dist, s, y[i]}).value;
              }
              if (post > best_post) {
                best_post = post;
                best = i;
              }
            }
            return best;
          }};
}

Policy random_policy() {
  return {"random", [](const NoiseProfile&, std::span<const double> y, SplitMix64& rng) {
            auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(y.size()));
            return std::min(k, y.size() - 1);
          }};
}

Policy prefix_policy(std::size_t count) {
  if (count < 1) throw std::invalid_argument("prefix_policy: count must be >= 1");
  std::ostringstream name;
  name << "prefix(" << count << ")";
  return {name.str(), [count](const NoiseProfile&, std::span<const double> y, SplitMix64&) {
            return argmax_prefix(y, std::min(count, y.size()));
          }};
}

Policy exact_prefix_policy() {
  return {"prefix(exact)", [](const NoiseProfile& profile, std::span<const double> y, SplitMix64&) {
            const std::size_t k = std::max<std::size_t>(1, profile.exact_count());
            return argmax_prefix(y, std::min(k, y.size()));
          }};
}

HindsightResult best_linear_hindsight(const NoiseProfile& profile, const Realization& world,
                                      std::span<const double> c_grid) {
  if (c_grid.empty()) throw std::invalid_argument("best_linear_hindsight: empty c grid");
  const auto& y = world.y;
  const std::size_t n = y.size();

  // Within a run of equal sigma the winning box never depends on c, so the
  // per-c argmax only compares one candidate per distinct noise level.
  struct Group {
    double sigma;
    std::size_t best_idx;
    double best_y;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < n;) {
    Group g{profile.sigma(i), i, y[i]};
    std::size_t j = i + 1;
    while (j < n && profile.sigma(j) == g.sigma) {
      if (y[j] > g.best_y) {
        g.best_y = y[j];
        g.best_idx = j;
      }
      ++j;
    }
    groups.push_back(g);
    i = j;
  }

  HindsightResult out{-std::numeric_limits<double>::infinity(), c_grid.front()};
  for (const double c : c_grid) {
    const Group* win = &groups.front();
    double win_score = win->best_y - c * win->sigma;
    for (std::size_t g = 1; g < groups.size(); ++g) {
      const double s = groups[g].best_y - c * groups[g].sigma;
      if (s > win_score) {
        win_score = s;
        win = &groups[g];
      }
    }
    const double reward = world.x[win->best_idx];
    if (reward > out.reward) {
      out.reward = reward;
      out.best_c = c;
    }
  }
  return out;
}

BenchmarkRewards benchmark_rewards(const Realization& world) {
  double mx = world.x[0], sum = 0.0;
  for (double v : world.x) {
    mx = std::max(mx, v);
    sum += v;
  }
  return {mx, sum / static_cast<double>(world.x.size())};
}

Policy compile(const PolicySpec& spec, const RewardDistribution& dist) {
  switch (spec.kind) {
    case PolicySpec::Kind::naive:
      return naive_policy();
    case PolicySpec::Kind::linear_fixed:
      return linear_fixed_policy(spec.c);
    case PolicySpec::Kind::linear_gamma:
      return linear_gamma_policy(spec.gamma);
    case PolicySpec::Kind::ignore_large:
      return ignore_large_policy(spec.force_alpha);
    case PolicySpec::Kind::ignore_large_exp:
      return ignore_large_exp_policy(spec.force_alpha);
    case PolicySpec::Kind::opt:
      return opt_policy(dist);
    case PolicySpec::Kind::random:
      return random_policy();
    case PolicySpec::Kind::prefix:
      return spec.prefix_count ? prefix_policy(*spec.prefix_count) : exact_prefix_policy();
  }
  throw std::invalid_argument("compile: unknown policy kind");
}

}  // namespace boxlab
