#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "boxlab/distribution.hpp"
#include "boxlab/policies.hpp"
#include "boxlab/regimes.hpp"

namespace boxlab {

using json = nlohmann::json;

// Parsing is fail-closed: unknown keys raise ConfigError so a typo in a
// constant override cannot be silently ignored.

json to_json(const RewardDistribution& dist);
RewardDistribution distribution_from_json(const json& j);

json to_json(const PolicySpec& spec);
PolicySpec policy_from_json(const json& j);

json to_json(const RegimeReport& report);
json to_json(const AdversarialConstruction& construction);

// Noise comes either as explicit sigmas or as a construction recipe (which
// needs n).  Constructions re-derive deterministically, so embedding the
// recipe in an output file is enough to replay it.
struct NoiseSpec {
  std::optional<std::vector<double>> sigma;
  std::optional<std::string> construction;  // "naive_adversary" | "linear_adversary"
  std::optional<std::size_t> n;
  NaiveAdversaryOverrides naive_overrides;
  LinearAdversaryOverrides linear_overrides;

  NoiseProfile build(const RewardDistribution& dist) const;
};

json to_json(const NoiseSpec& spec);
NoiseSpec noise_from_json(const json& j);

struct ExperimentConfig {
  RewardDistribution dist;
  NoiseSpec noise;
  std::vector<PolicySpec> policies;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  bool benchmark_prophet = true;
  bool benchmark_random = true;
};

json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_from_json(const json& j);

struct SeparationConfig {
  RewardDistribution dist = RewardDistribution::exponential(1.0);
  std::vector<std::size_t> ns = {200, 1000, 5000};
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;

  // naive-vs-opt: rebuild two_point(1/n, n) at each n when the configured
  // distribution is two-point.
  bool scale_two_point_with_n = true;

  // linear-vs-opt
  double cs_exponent = 0.3;
  double alpha_exponent = 0.5;
  std::size_t c_grid_points = 64;
  double c_grid_min = 0.01;

  // medium-noise-opt-vs-prophet
  std::vector<double> cs = {0.1, 0.3, 0.6};
  double sigma_multiplier = 100.0;

  // large-noise-opt-vs-random
  double cn = 4.0;

  // ignore-large approximations
  double c = 0.5;
  double sigma_big_factor = 1000.0;
};

json to_json(const SeparationConfig& config);
SeparationConfig separation_from_json(const json& j);

struct VerifyConfig {
  std::vector<RewardDistribution> dists = {RewardDistribution::exponential(1.0),
                                           RewardDistribution::half_normal(1.0)};
  std::vector<std::string> suite;  // empty => full default suite
  std::vector<std::size_t> n_grid = {4, 8, 16, 32, 64, 128, 256};
  std::uint64_t mc_samples = 100000;
  std::uint64_t seed = 20240601;
};

json to_json(const VerifyConfig& config);
VerifyConfig verify_from_json(const json& j);

// Shared helper: rejects keys outside `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where);

}  // namespace boxlab
