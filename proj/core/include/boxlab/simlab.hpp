#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boxlab/config.hpp"
#include "boxlab/distribution.hpp"
#include "boxlab/policies.hpp"

namespace boxlab {

struct ExperimentSpec {
  RewardDistribution dist;
  NoiseProfile profile;
  std::vector<PolicySpec> policies;
  std::uint64_t trials = 1;
  std::uint64_t seed = 1;
  bool benchmark_prophet = true;
  bool benchmark_random = true;
  // When set, adds a "best_linear_hindsight" row: per-trial max realized
  // reward over this c-grid (an upper bound for the whole linear family).
  std::optional<std::vector<double>> hindsight_c_grid;
};

struct RewardEstimate {
  std::string policy;
  double mean = 0.0;
  double stderr_of_mean = 0.0;  // sample standard deviation / sqrt(trials)
  std::uint64_t trials = 0;
};

struct ExperimentResult {
  std::vector<RewardEstimate> estimates;
  const RewardEstimate& row(std::string_view name) const;
  // mean(named row) / mean(prophet row) etc. recomputed on demand
  double ratio(std::string_view numerator, std::string_view denominator) const;
};

struct TraceRow {
  std::uint64_t trial;
  std::uint32_t policy;  // index into the compiled policy list
  std::size_t choice;    // 0-based box index (sorted-by-sigma order)
  double reward;
};
using TraceSink = std::function<void(const TraceRow&)>;

// Paired Monte Carlo evaluation: every policy sees the same realizations;
// trial t draws from substream(seed, t).  Results are bit-identical for any
// thread count because partial sums are reduced in fixed block order.
ExperimentResult estimate_reward(const ExperimentSpec& spec, unsigned threads = 0,
                                 const TraceSink& sink = nullptr);

// Same engine with caller-compiled policies (tests inject sentinels here).
ExperimentResult estimate_reward_compiled(const ExperimentSpec& spec,
                                          std::span<const Policy> policies, unsigned threads = 0,
                                          const TraceSink& sink = nullptr);

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 0,
                                const TraceSink& sink = nullptr);

struct SeparationPoint {
  std::string label;
  json meta;  // construction echo, regime report, derived constants
  std::vector<RewardEstimate> estimates;
  std::map<std::string, double> ratios;
};

struct SeparationReport {
  std::string name;
  json params;  // resolved configuration
  std::vector<std::string> notes;
  std::vector<SeparationPoint> points;
};

// name is one of: naive-vs-opt, linear-vs-opt, medium-noise-opt-vs-prophet,
// large-noise-opt-vs-random, ignore-large-approx, ignore-large-exp-approx.
SeparationReport run_separation(const std::string& name, const SeparationConfig& config,
                                unsigned threads = 0);

std::vector<std::string> separation_names();

struct LemmaCheckResult {
  std::string lemma;
  std::string point;   // parameter point the sides were measured at
  double lhs = 0.0;    // inequality oriented as lhs <= rhs
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs (minus MC slack where applicable)
  bool pass = false;
  std::string method;  // "exact" | "quadrature" | "monte-carlo(...)"
};

struct LemmaParams {
  std::vector<RewardDistribution> dists = {RewardDistribution::exponential(1.0),
                                           RewardDistribution::half_normal(1.0)};
  std::vector<std::size_t> n_grid = {4, 8, 16, 32, 64, 128, 256};
  std::uint64_t mc_samples = 100000;
  std::uint64_t seed = 20240601;
};

std::vector<std::string> default_lemma_suite();  // the 15 check ids

std::vector<LemmaCheckResult> verify_lemmas(std::span<const std::string> ids,
                                            const LemmaParams& params);

json to_json(const RewardEstimate& estimate);
json to_json(const ExperimentResult& result);
json to_json(const SeparationReport& report);
json to_json(const LemmaCheckResult& result);

}  // namespace boxlab
