#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "boxlab/distribution.hpp"
#include "boxlab/rng.hpp"

namespace boxlab {

// One drawn world: y = x + eps element-wise, boxes ordered like the profile.
struct Realization {
  std::vector<double> x;
  std::vector<double> eps;
  std::vector<double> y;
};

// The gamma(sigma, y) family is restricted to shapes that serialize, so a
// separation experiment is fully described by its config.
struct GammaConstant {
  double value;
};
struct GammaQuantileRule {
  double y_quantile;      // p in [0,1]: empirical quantile of the observations
  double sigma_quantile;  // p in [0,1]: empirical quantile of the noise scales
};
struct GammaTable {
  enum class Stat { mean_y, max_y, mean_sigma, max_sigma };
  Stat stat;
  std::vector<double> knots;   // ascending
  std::vector<double> values;  // same length; linear interpolation, clamped ends
};
using GammaSpec = std::variant<GammaConstant, GammaQuantileRule, GammaTable>;

double evaluate_gamma(const GammaSpec& spec, const NoiseProfile& profile,
                      std::span<const double> y);

// A selection rule over (sigma, y).  Deterministic policies ignore the RNG
// handle; the randomized prefix policies draw alpha from it.
class Policy {
 public:
  using Fn = std::function<std::size_t(const NoiseProfile&, std::span<const double>, SplitMix64&)>;

  Policy(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  std::size_t choose(const NoiseProfile& profile, std::span<const double> y,
                     SplitMix64& rng) const {
    return fn_(profile, y, rng);
  }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

Policy naive_policy();
Policy linear_fixed_policy(double c);
Policy linear_gamma_policy(GammaSpec spec);
// Draw alpha ~ U[0,1], run naive on the floor(alpha*n) lowest-noise boxes
// (never fewer than one).  forced_alpha is the deterministic test hook.
Policy ignore_large_policy(std::optional<double> forced_alpha = std::nullopt);
// Same with prefix size floor(n^alpha).
Policy ignore_large_exp_policy(std::optional<double> forced_alpha = std::nullopt);
// Clairvoyant argmax of E[X_i | Y_i = y_i]; closed form for half-normal D.
Policy opt_policy(RewardDistribution dist);
Policy random_policy();
// Naive restricted to the first `count` (lowest-noise) boxes.
Policy prefix_policy(std::size_t count);
// Naive restricted to the sigma == 0 boxes (falls back to box 0 if none).
Policy exact_prefix_policy();

struct HindsightResult {
  double reward;  // best realized reward over the grid
  double best_c;  // smallest c attaining it
};

// Realized-reward upper bound for the whole linear family on one world:
// max over the c-grid of x[argmax_i (y_i - c sigma_i)].
HindsightResult best_linear_hindsight(const NoiseProfile& profile, const Realization& world,
                                      std::span<const double> c_grid);

struct BenchmarkRewards {
  double prophet;        // max_i x_i
  double random_expect;  // mean of x
};

BenchmarkRewards benchmark_rewards(const Realization& world);

// Serializable policy description; compile() turns it into a Policy.
struct PolicySpec {
  enum class Kind {
    naive,
    linear_fixed,
    linear_gamma,
    ignore_large,
    ignore_large_exp,
    opt,
    random,
    prefix
  };
  Kind kind = Kind::naive;
  double c = 0.0;
  GammaSpec gamma = GammaConstant{0.0};
  std::optional<double> force_alpha;
  std::optional<std::size_t> prefix_count;  // nullopt => exact (sigma == 0) boxes
};

Policy compile(const PolicySpec& spec, const RewardDistribution& dist);

}  // namespace boxlab
