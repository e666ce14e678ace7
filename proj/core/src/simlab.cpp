#include "boxlab/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "boxlab/errors.hpp"
#include "boxlab/order_stats.hpp"
#include "boxlab/regimes.hpp"

namespace boxlab {

namespace {

constexpr std::uint64_t kBlock = 512;  // trials per reduction block

// Draws one trial's world.  A single normal_distribution instance per trial
// keeps the polar method's spare sample, and is recreated each trial so the
// stream never leaks across block boundaries.
struct TrialSampler {
  SplitMix64 rng;
  std::normal_distribution<double> norm;

  explicit TrialSampler(SplitMix64 r) : rng(r) {}

  double sample_reward(const RewardDistribution& dist) {
    switch (dist.kind()) {
      case DistKind::exponential:
        return -std::log1p(-rng.uniform()) / dist.param(0);
      case DistKind::half_normal:
        return std::abs(norm(rng)) * dist.param(0);
      case DistKind::two_point:
        return rng.uniform() < dist.param(1) ? dist.param(0) : 0.0;
      case DistKind::uniform:
        return dist.param(0) + rng.uniform() * (dist.param(1) - dist.param(0));
      case DistKind::point_mass:
        return dist.param(0);
    }
    return 0.0;
  }

  void fill(const RewardDistribution& dist, const NoiseProfile& profile, Realization& world) {
    const std::size_t n = profile.size();
    for (std::size_t i = 0; i < n; ++i) world.x[i] = sample_reward(dist);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = profile.sigma(i);
      world.eps[i] = s > 0.0 ? s * norm(rng) : 0.0;
      world.y[i] = world.x[i] + world.eps[i];
    }
  }
};

struct RowAccumulator {
  double sum = 0.0;
  double sumsq = 0.0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
  }
};

}  // namespace

const RewardEstimate& ExperimentResult::row(std::string_view name) const {
  for (const auto& e : estimates)
    if (e.policy == name) return e;
  throw std::out_of_range("ExperimentResult: no row named \"" + std::string(name) + "\"");
}

double ExperimentResult::ratio(std::string_view numerator, std::string_view denominator) const {
  return row(numerator).mean / row(denominator).mean;
}

ExperimentResult estimate_reward_compiled(const ExperimentSpec& spec,
                                          std::span<const Policy> policies, unsigned threads,
                                          const TraceSink& sink) {
  if (spec.trials < 1) throw std::invalid_argument("estimate_reward: trials must be >= 1");
  const std::size_t n = spec.profile.size();
  const std::size_t n_policies = policies.size();

  // Row layout: policies, then hindsight (+best_c), then prophet, random.
  std::size_t rows = n_policies;
  const std::optional<std::size_t> hindsight_row =
      spec.hindsight_c_grid ? std::optional(rows) : std::nullopt;
  if (spec.hindsight_c_grid) rows += 2;
  const std::optional<std::size_t> prophet_row =
      spec.benchmark_prophet ? std::optional(rows) : std::nullopt;
  if (spec.benchmark_prophet) ++rows;
  const std::optional<std::size_t> random_row =
      spec.benchmark_random ? std::optional(rows) : std::nullopt;
  if (spec.benchmark_random) ++rows;
  if (rows == 0) throw std::invalid_argument("estimate_reward: nothing to estimate");

  const std::uint64_t n_blocks = (spec.trials + kBlock - 1) / kBlock;
  std::vector<std::vector<RowAccumulator>> block_sums(n_blocks);
  std::vector<std::vector<TraceRow>> block_traces(sink ? n_blocks : 0);
  std::vector<std::exception_ptr> block_errors(n_blocks);

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned n_threads =
      std::max(1u, std::min(threads == 0 ? hw : threads,
                            static_cast<unsigned>(std::min<std::uint64_t>(n_blocks, 256))));

  std::atomic<std::uint64_t> next_block{0};

  auto worker = [&]() {
    Realization world;
    world.x.resize(n);
    world.eps.resize(n);
    world.y.resize(n);
    for (;;) {
      const std::uint64_t b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      auto& sums = block_sums[b];
      sums.assign(rows, RowAccumulator{});
      const std::uint64_t t_end = std::min(spec.trials, (b + 1) * kBlock);
      for (std::uint64_t t = b * kBlock; t < t_end; ++t) {
        try {
          TrialSampler sampler(substream(spec.seed, t, 0));
          sampler.fill(spec.dist, spec.profile, world);
          for (std::size_t p = 0; p < n_policies; ++p) {
            SplitMix64 prng = substream(spec.seed, t, 1 + p);
            const std::size_t choice = policies[p].choose(spec.profile, world.y, prng);
            if (choice >= n) throw NumericalError(policies[p].name() + " returned box out of range");
            const double reward = world.x[choice];
            sums[p].add(reward);
            if (sink) block_traces[b].push_back({t, static_cast<std::uint32_t>(p), choice, reward});
          }
          if (hindsight_row) {
            const auto h = best_linear_hindsight(spec.profile, world, *spec.hindsight_c_grid);
            sums[*hindsight_row].add(h.reward);
            sums[*hindsight_row + 1].add(h.best_c);
          }
          if (prophet_row || random_row) {
            const auto bench = benchmark_rewards(world);
            if (prophet_row) sums[*prophet_row].add(bench.prophet);
            if (random_row) sums[*random_row].add(bench.random_expect);
          }
        } catch (const std::exception& e) {
          std::ostringstream os;
          os << "trial " << t << " (substream of seed " << spec.seed << "): " << e.what();
          block_errors[b] = std::make_exception_ptr(NumericalError(os.str()));
          return;
        }
      }
    }
  };

  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::uint64_t b = 0; b < n_blocks; ++b)
    if (block_errors[b]) std::rethrow_exception(block_errors[b]);

  // Fixed reduction order: block 0, 1, 2, ... regardless of thread count.
  std::vector<RowAccumulator> totals(rows);
  for (std::uint64_t b = 0; b < n_blocks; ++b) {
    if (block_sums[b].empty()) continue;
    for (std::size_t r = 0; r < rows; ++r) {
      totals[r].sum += block_sums[b][r].sum;
      totals[r].sumsq += block_sums[b][r].sumsq;
    }
  }

  if (sink)
    for (std::uint64_t b = 0; b < n_blocks; ++b)
      for (const auto& row : block_traces[b]) sink(row);

  const auto t_count = static_cast<double>(spec.trials);
  auto finish = [&](std::size_t r, std::string name) {
    RewardEstimate e;
    e.policy = std::move(name);
    e.trials = spec.trials;
    e.mean = totals[r].sum / t_count;
    if (spec.trials > 1) {
      const double var =
          std::max(0.0, (totals[r].sumsq - totals[r].sum * totals[r].sum / t_count) /
                            (t_count - 1.0));
      e.stderr_of_mean = std::sqrt(var / t_count);
    }
    return e;
  };

  ExperimentResult out;
  for (std::size_t p = 0; p < n_policies; ++p)
    out.estimates.push_back(finish(p, policies[p].name()));
  if (hindsight_row) {
    out.estimates.push_back(finish(*hindsight_row, "best_linear_hindsight"));
    out.estimates.push_back(finish(*hindsight_row + 1, "hindsight_best_c"));
  }
  if (prophet_row) out.estimates.push_back(finish(*prophet_row, "prophet"));
  if (random_row) out.estimates.push_back(finish(*random_row, "random"));
  return out;
}

ExperimentResult estimate_reward(const ExperimentSpec& spec, unsigned threads,
                                 const TraceSink& sink) {
  std::vector<Policy> compiled;
  compiled.reserve(spec.policies.size());
  for (const auto& ps : spec.policies) compiled.push_back(compile(ps, spec.dist));
  return estimate_reward_compiled(spec, compiled, threads, sink);
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads,
                                const TraceSink& sink) {
  ExperimentSpec spec{.dist = config.dist,
                      .profile = config.noise.build(config.dist),
                      .policies = config.policies,
                      .trials = config.trials,
                      .seed = config.seed,
                      .benchmark_prophet = config.benchmark_prophet,
                      .benchmark_random = config.benchmark_random,
                      .hindsight_c_grid = std::nullopt};
  return estimate_reward(spec, threads, sink);
}

// ---------------------------------------------------------------------------
// Separation experiments
// ---------------------------------------------------------------------------

namespace {

std::vector<double> hindsight_grid(std::size_t points, double c_min, double c_max) {
  std::vector<double> grid{0.0};
  if (points < 2 || !(c_max > c_min) || !(c_min > 0.0))
    throw std::invalid_argument("hindsight grid: need points >= 2 and 0 < c_min < c_max");
  const std::size_t m = points - 1;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(m - 1);
    grid.push_back(c_min * std::pow(c_max / c_min, f));
  }
  return grid;
}

NoiseProfile pivot_profile(std::size_t n, std::size_t pivot, double sigma_big) {
  // pivot-1 exact boxes, the rest at sigma_big; sigma_{pivot} = sigma_big.
  std::vector<double> sigma(n, sigma_big);
  for (std::size_t i = 0; i + 1 < pivot; ++i) sigma[i] = 0.0;
  return NoiseProfile(std::move(sigma));
}

std::size_t round_index(double v, std::size_t n) {
  if (v < 1.0) return 1;
  if (v > static_cast<double>(n)) return n;
  return static_cast<std::size_t>(std::llround(v));
}

SeparationReport naive_vs_opt(const SeparationConfig& config, unsigned threads) {
  SeparationReport report;
  report.name = "naive-vs-opt";
  report.notes.push_back(
      "opt-proxy is naive over the exact prefix; it lower-bounds the optimal policy, so "
      "opt-proxy/naive lower-bounds the true separation");
  for (const std::size_t n : config.ns) {
    RewardDistribution dist = config.dist;
    if (config.scale_two_point_with_n && dist.kind() == DistKind::two_point)
      dist = RewardDistribution::two_point(static_cast<double>(n), 1.0 / static_cast<double>(n));
    auto construction = construct_naive_adversary(dist, n);
    ExperimentSpec spec{.dist = dist,
                        .profile = construction.profile,
                        .policies = {PolicySpec{.kind = PolicySpec::Kind::naive},
                                     PolicySpec{.kind = PolicySpec::Kind::prefix}},
                        .trials = config.trials,
                        .seed = config.seed,
                        .benchmark_prophet = true,
                        .benchmark_random = true,
                        .hindsight_c_grid = std::nullopt};
    auto result = estimate_reward(spec, threads);

    SeparationPoint point;
    point.label = "n=" + std::to_string(n);
    point.meta = {{"construction", to_json(construction)},
                  {"distribution", to_json(dist)},
                  {"mean_reward", dist.mean()},
                  {"expected_max", expected_max(dist, n)}};
    point.ratios["opt_proxy_over_naive"] = result.ratio("prefix(exact)", "naive");
    point.ratios["naive_over_mean"] = result.row("naive").mean / dist.mean();
    point.ratios["opt_proxy_over_expected_max"] =
        result.row("prefix(exact)").mean / expected_max(dist, n);
    point.estimates = std::move(result.estimates);
    report.points.push_back(std::move(point));
  }
  report.notes.push_back("compare: naive <= 4 E[D]; opt-proxy >= E[D_{n:n}]/2; ratio grows with n");
  return report;
}

SeparationReport linear_vs_opt(const SeparationConfig& config, unsigned threads) {
  SeparationReport report;
  report.name = "linear-vs-opt";
  report.notes.push_back(
      "opt-proxy is naive over the exact+small-noise prefix (the witness policy); "
      "best_linear_hindsight upper-bounds every linear policy whose gamma lands on the grid");
  for (const std::size_t n : config.ns) {
    LinearAdversaryOverrides ov;
    ov.small_count = round_index(std::pow(static_cast<double>(n), config.cs_exponent), n);
    ov.alpha_exponent = config.alpha_exponent;
    auto construction = construct_linear_adversary(config.dist, n, ov);
    const double c_max = 2.0 * std::sqrt(std::log(static_cast<double>(n)));
    auto grid = hindsight_grid(config.c_grid_points, config.c_grid_min, c_max);

    ExperimentSpec spec{
        .dist = config.dist,
        .profile = construction.profile,
        .policies = {PolicySpec{.kind = PolicySpec::Kind::naive},
                     PolicySpec{.kind = PolicySpec::Kind::prefix,
                                .prefix_count = construction.noisy_count + 1}},
        .trials = config.trials,
        .seed = config.seed,
        .benchmark_prophet = true,
        .benchmark_random = true,
        .hindsight_c_grid = grid};
    auto result = estimate_reward(spec, threads);

    const std::string proxy = "prefix(" + std::to_string(construction.noisy_count + 1) + ")";
    SeparationPoint point;
    point.label = "n=" + std::to_string(n);
    point.meta = {{"construction", to_json(construction)},
                  {"c_grid", grid},
                  {"expected_max", expected_max(config.dist, n)}};
    point.ratios["opt_proxy_over_best_linear"] = result.ratio(proxy, "best_linear_hindsight");
    point.ratios["opt_proxy_over_naive"] = result.ratio(proxy, "naive");
    point.ratios["best_linear_over_mean"] =
        result.row("best_linear_hindsight").mean / config.dist.mean();
    point.estimates = std::move(result.estimates);
    report.points.push_back(std::move(point));
  }
  report.notes.push_back("compare: opt-proxy/best_linear increases with n (Omega(log n) direction)");
  return report;
}

SeparationReport medium_noise_opt_vs_prophet(const SeparationConfig& config, unsigned threads) {
  SeparationReport report;
  report.name = "medium-noise-opt-vs-prophet";
  const std::size_t n = config.ns.front();
  const double ln_n = std::log(static_cast<double>(n));
  const double e_max = expected_max(config.dist, n);
  report.notes.push_back(
      "profiles: pivot-1 exact boxes, the rest at sigma_multiplier x the medium-noise threshold; "
      "each profile is verified to sit in the medium-noise regime at its c");
  report.notes.push_back("compare: R_opt/E[D_{n:n}] increases in c and collapses for small c");

  // Zero-noise baseline first.
  {
    ExperimentSpec spec{.dist = config.dist,
                        .profile = NoiseProfile(std::vector<double>(n, 0.0)),
                        .policies = {PolicySpec{.kind = PolicySpec::Kind::opt}},
                        .trials = config.trials,
                        .seed = config.seed,
                        .benchmark_prophet = true,
                        .benchmark_random = false,
                        .hindsight_c_grid = std::nullopt};
    auto result = estimate_reward(spec, threads);
    SeparationPoint point;
    point.label = "zero-noise";
    point.meta = {{"n", n}, {"expected_max", e_max}};
    point.ratios["opt_over_expected_max"] = result.row("opt").mean / e_max;
    point.estimates = std::move(result.estimates);
    report.points.push_back(std::move(point));
  }

  for (const double c : config.cs) {
    const std::size_t pivot = round_index(std::pow(static_cast<double>(n), c), n);
    const double threshold =
        expected_max(config.dist, pivot) / (18.0 * c * std::sqrt(2.0 * ln_n));
    const double sigma_big = config.sigma_multiplier * threshold;
    auto profile = pivot_profile(n, pivot, sigma_big);
    auto regime = classify(config.dist, n, c, profile);

    ExperimentSpec spec{.dist = config.dist,
                        .profile = profile,
                        .policies = {PolicySpec{.kind = PolicySpec::Kind::opt}},
                        .trials = config.trials,
                        .seed = config.seed,
                        .benchmark_prophet = true,
                        .benchmark_random = false,
                        .hindsight_c_grid = std::nullopt};
    auto result = estimate_reward(spec, threads);

    SeparationPoint point;
    std::ostringstream label;
    label << "c=" << c;
    point.label = label.str();
    point.meta = {{"n", n},
                  {"pivot", pivot},
                  {"medium_threshold", threshold},
                  {"sigma_big", sigma_big},
                  {"regime", to_json(regime)},
                  {"expected_max", e_max}};
    point.ratios["opt_over_expected_max"] = result.row("opt").mean / e_max;
    point.estimates = std::move(result.estimates);
    report.points.push_back(std::move(point));
  }
  return report;
}

SeparationReport large_noise_opt_vs_random(const SeparationConfig& config, unsigned threads) {
  SeparationReport report;
  report.name = "large-noise-opt-vs-random";
  const std::size_t n = config.ns.front();
  const double ln_n = std::log(static_cast<double>(n));
  const double c = config.cn / static_cast<double>(n);
  const std::size_t pivot = round_index(config.cn, n);
  const double threshold = expected_max(config.dist, pivot) * std::sqrt(ln_n) / std::log(config.cn);
  const double sigma_big = config.sigma_multiplier * threshold;
  auto profile = pivot_profile(n, pivot, sigma_big);
  auto regime = classify(config.dist, n, c, profile);

  ExperimentSpec spec{.dist = config.dist,
                      .profile = profile,
                      .policies = {PolicySpec{.kind = PolicySpec::Kind::opt},
                                   PolicySpec{.kind = PolicySpec::Kind::random}},
                      .trials = config.trials,
                      .seed = config.seed,
                      .benchmark_prophet = true,
                      .benchmark_random = true,
                      .hindsight_c_grid = std::nullopt};
  auto result = estimate_reward(spec, threads);

  SeparationPoint point;
  point.label = "cn=" + std::to_string(config.cn);
  const double bound = 86.0 * std::sqrt(std::log(config.cn)) * config.dist.mean();
  point.meta = {{"n", n},
                {"c", c},
                {"pivot", pivot},
                {"large_threshold", threshold},
                {"sigma_big", sigma_big},
                {"regime", to_json(regime)},
                {"bound_86_sqrt_ln_cn_mean", bound}};
  point.ratios["opt_over_mean"] = result.row("opt").mean / config.dist.mean();
  point.ratios["opt_over_random"] = result.ratio("opt", "random");
  point.ratios["opt_over_bound"] = result.row("opt").mean / bound;
  point.estimates = std::move(result.estimates);
  report.points.push_back(std::move(point));
  report.notes.push_back("compare: R_opt <= 86 sqrt(ln(cn)) E[D]");
  return report;
}

SeparationReport ignore_large_approx(const SeparationConfig& config, unsigned threads,
                                     bool exponential_prefix) {
  SeparationReport report;
  report.name = exponential_prefix ? "ignore-large-exp-approx" : "ignore-large-approx";
  const std::size_t n = config.ns.front();
  const double e_max = expected_max(config.dist, n);
  const std::size_t good =
      exponential_prefix
          ? round_index(std::pow(static_cast<double>(n), config.c), n)
          : round_index(config.c * static_cast<double>(n), n);
  const double sigma_big = config.sigma_big_factor * e_max;

  std::vector<double> sigma(n, sigma_big);
  for (std::size_t i = 0; i < good; ++i) sigma[i] = 0.0;
  NoiseProfile profile{std::move(sigma)};
  auto regime = classify(config.dist, n, config.c, profile);

  ExperimentSpec spec{.dist = config.dist,
                      .profile = profile,
                      .policies = {PolicySpec{.kind = exponential_prefix
                                                  ? PolicySpec::Kind::ignore_large_exp
                                                  : PolicySpec::Kind::ignore_large}},
                      .trials = config.trials,
                      .seed = config.seed,
                      .benchmark_prophet = true,
                      .benchmark_random = true,
                      .hindsight_c_grid = std::nullopt};
  auto result = estimate_reward(spec, threads);

  const std::string policy = exponential_prefix ? "ignore_large_exp" : "ignore_large";
  const double guarantee =
      exponential_prefix ? config.c * config.c / 576.0 : config.c * config.c / 20.0;
  SeparationPoint point;
  point.label = "n=" + std::to_string(n) + ", c=" + std::to_string(config.c);
  point.meta = {{"n", n},
                {"c", config.c},
                {"good_boxes", good},
                {"sigma_big", sigma_big},
                {"regime", to_json(regime)},
                {"expected_max", e_max},
                {"guarantee", guarantee}};
  point.ratios["policy_over_expected_max"] = result.row(policy).mean / e_max;
  point.ratios["policy_over_prophet"] = result.ratio(policy, "prophet");
  point.estimates = std::move(result.estimates);
  report.points.push_back(std::move(point));
  std::ostringstream note;
  note << "compare: " << policy << "/E[D_{n:n}] >= " << guarantee;
  report.notes.push_back(note.str());
  return report;
}

}  // namespace

std::vector<std::string> separation_names() {
  return {"naive-vs-opt",
          "linear-vs-opt",
          "medium-noise-opt-vs-prophet",
          "large-noise-opt-vs-random",
          "ignore-large-approx",
          "ignore-large-exp-approx"};
}

SeparationReport run_separation(const std::string& name, const SeparationConfig& config,
                                unsigned threads) {
  SeparationReport report;
  if (name == "naive-vs-opt") {
    report = naive_vs_opt(config, threads);
  } else if (name == "linear-vs-opt") {
    report = linear_vs_opt(config, threads);
  } else if (name == "medium-noise-opt-vs-prophet") {
    report = medium_noise_opt_vs_prophet(config, threads);
  } else if (name == "large-noise-opt-vs-random") {
    report = large_noise_opt_vs_random(config, threads);
  } else if (name == "ignore-large-approx") {
    report = ignore_large_approx(config, threads, false);
  } else if (name == "ignore-large-exp-approx") {
    report = ignore_large_approx(config, threads, true);
  } else {
    throw ConfigError("run_separation: unknown experiment \"" + name + "\"");
  }
  report.params = to_json(config);
  return report;
}

json to_json(const RewardEstimate& estimate) {
  return {{"policy", estimate.policy},
          {"mean", estimate.mean},
          {"stderr", estimate.stderr_of_mean},
          {"trials", estimate.trials}};
}

json to_json(const ExperimentResult& result) {
  json rows = json::array();
  for (const auto& e : result.estimates) rows.push_back(to_json(e));
  return {{"estimates", rows}};
}

json to_json(const SeparationReport& report) {
  json points = json::array();
  for (const auto& p : report.points) {
    json rows = json::array();
    for (const auto& e : p.estimates) rows.push_back(to_json(e));
    points.push_back(
        {{"label", p.label}, {"meta", p.meta}, {"estimates", rows}, {"ratios", p.ratios}});
  }
  return {{"name", report.name},
          {"params", report.params},
          {"notes", report.notes},
          {"points", points}};
}

json to_json(const LemmaCheckResult& result) {
  return {{"lemma", result.lemma}, {"point", result.point}, {"lhs", result.lhs},
          {"rhs", result.rhs},     {"margin", result.margin}, {"pass", result.pass},
          {"method", result.method}};
}

}  // namespace boxlab
