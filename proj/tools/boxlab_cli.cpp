#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "boxlab/config.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/order_stats.hpp"
#include "boxlab/posterior.hpp"
#include "boxlab/simlab.hpp"
#include "boxlab/version.hpp"

namespace fs = std::filesystem;
using boxlab::json;

namespace {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  unsigned threads = 0;  // 0 = machine parallelism
  std::string format = "text";
  std::string out_dir;
};

std::string fmt6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw boxlab::ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw boxlab::ConfigError(std::string("config parse error in ") + path + ": " + e.what());
  }
  return j;
}

// Accepts either a JSON object or a bare kind name with default parameters.
boxlab::RewardDistribution parse_dist_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return boxlab::distribution_from_json(json::parse(arg));
  json j{{"kind", arg}};
  if (arg == "exponential") j["rate"] = 1.0;
  if (arg == "uniform") {
    j["lo"] = 0.0;
    j["hi"] = 1.0;
  }
  return boxlab::distribution_from_json(j);
}

// Every output document carries enough to replay itself.
json output_envelope(const json& resolved_config, std::uint64_t seed) {
  return {{"artifact", {{"name", boxlab::kArtifactName}, {"version", boxlab::kArtifactVersion}}},
          {"seed", seed},
          {"config", resolved_config}};
}

void emit(const GlobalOptions& opts, const std::string& stem, const json& doc,
          const std::string& text_rendering) {
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    const fs::path path = fs::path(opts.out_dir) / (stem + ".json");
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
    std::cout << "wrote " << path.string() << "\n";
  }
  if (opts.format == "json")
    std::cout << doc.dump(2) << "\n";
  else if (opts.format == "text")
    std::cout << text_rendering;
}

std::string render_estimates(const std::vector<boxlab::RewardEstimate>& estimates) {
  std::ostringstream os;
  std::size_t width = 8;
  for (const auto& e : estimates) width = std::max(width, e.policy.size());
  os << std::left << std::setw(static_cast<int>(width) + 2) << "policy"
     << std::right << std::setw(14) << "mean" << std::setw(14) << "stderr" << std::setw(12)
     << "trials" << "\n";
  for (const auto& e : estimates) {
    os << std::left << std::setw(static_cast<int>(width) + 2) << e.policy << std::right
       << std::setw(14) << fmt6(e.mean) << std::setw(14) << fmt6(e.stderr_of_mean)
       << std::setw(12) << e.trials << "\n";
  }
  return os.str();
}

int cmd_simulate(const std::string& config_path, const GlobalOptions& opts) {
  json raw = load_json(config_path);
  auto config = boxlab::experiment_from_json(raw);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.trials) config.trials = *opts.trials;

  std::vector<boxlab::Policy> policies;
  for (const auto& ps : config.policies) policies.push_back(boxlab::compile(ps, config.dist));

  std::ofstream trace_file;
  std::ostringstream trace_stdout;
  const bool want_trace = opts.format == "csv";
  if (want_trace && !opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    trace_file.open(fs::path(opts.out_dir) / "trace.csv");
    trace_file << "trial,policy,choice,reward\n";
  } else if (want_trace) {
    trace_stdout << "trial,policy,choice,reward\n";
  }
  boxlab::TraceSink sink = nullptr;
  if (want_trace) {
    sink = [&](const boxlab::TraceRow& row) {
      auto& os = trace_file.is_open() ? static_cast<std::ostream&>(trace_file) : trace_stdout;
      os << row.trial << "," << policies[row.policy].name() << "," << (row.choice + 1) << ","
         << row.reward << "\n";
    };
  }

  boxlab::ExperimentSpec spec{.dist = config.dist,
                              .profile = config.noise.build(config.dist),
                              .policies = config.policies,
                              .trials = config.trials,
                              .seed = config.seed,
                              .benchmark_prophet = config.benchmark_prophet,
                              .benchmark_random = config.benchmark_random,
                              .hindsight_c_grid = std::nullopt};
  auto result = boxlab::estimate_reward_compiled(spec, policies, opts.threads, sink);

  json doc = output_envelope(boxlab::to_json(config), config.seed);
  doc["results"] = boxlab::to_json(result);
  emit(opts, "simulate", doc, render_estimates(result.estimates));
  if (want_trace && !trace_file.is_open()) std::cout << trace_stdout.str();
  return 0;
}

int cmd_separation(const std::string& name, const std::string& config_path,
                   const GlobalOptions& opts) {
  json raw = load_json(config_path);
  auto config = boxlab::separation_from_json(raw);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.trials) config.trials = *opts.trials;

  auto report = boxlab::run_separation(name, config, opts.threads);

  std::ostringstream text;
  text << "separation " << report.name << "\n";
  for (const auto& note : report.notes) text << "  note: " << note << "\n";
  for (const auto& p : report.points) {
    text << "-- " << p.label << "\n";
    text << render_estimates(p.estimates);
    for (const auto& [k, v] : p.ratios) text << "  " << k << " = " << fmt6(v) << "\n";
  }

  json doc = output_envelope(boxlab::to_json(config), config.seed);
  doc["results"] = boxlab::to_json(report);
  emit(opts, "separation-" + name, doc, text.str());
  return 0;
}

int cmd_verify(const std::string& config_path, const GlobalOptions& opts) {
  json raw = load_json(config_path);
  auto config = boxlab::verify_from_json(raw);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.trials) config.mc_samples = *opts.trials;

  boxlab::LemmaParams params{.dists = config.dists,
                             .n_grid = config.n_grid,
                             .mc_samples = config.mc_samples,
                             .seed = config.seed};
  const auto suite = config.suite.empty() ? boxlab::default_lemma_suite() : config.suite;
  auto results = boxlab::verify_lemmas(suite, params);

  std::size_t failed = 0;
  std::ostringstream text;
  for (const auto& r : results) {
    if (!r.pass) ++failed;
    text << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(26) << r.lemma << " "
         << r.point << "  lhs=" << fmt6(r.lhs) << " rhs=" << fmt6(r.rhs)
         << " margin=" << fmt6(r.margin) << " [" << r.method << "]\n";
  }
  text << results.size() - failed << "/" << results.size() << " checks passed\n";

  json doc = output_envelope(boxlab::to_json(config), config.seed);
  json arr = json::array();
  for (const auto& r : results) arr.push_back(boxlab::to_json(r));
  doc["results"] = arr;
  doc["failed"] = failed;
  emit(opts, "verify", doc, text.str());
  return failed == 0 ? 0 : 3;
}

int cmd_construct(const std::string& kind, const std::string& config_path,
                  const GlobalOptions& opts) {
  json raw = load_json(config_path);
  boxlab::require_keys(raw, {"distribution", "n", "overrides", "c"}, "construct");
  const auto dist = boxlab::distribution_from_json(raw.at("distribution"));
  const auto n = raw.at("n").get<std::size_t>();
  const json ov = raw.contains("overrides") ? raw.at("overrides") : json::object();

  json noise_json{{"construction", kind}, {"n", n}, {"overrides", ov}};
  auto noise = boxlab::noise_from_json(noise_json);

  boxlab::AdversarialConstruction construction =
      kind == "naive_adversary"
          ? boxlab::construct_naive_adversary(dist, n, noise.naive_overrides)
          : boxlab::construct_linear_adversary(dist, n, noise.linear_overrides);

  double c;
  if (raw.contains("c")) {
    c = raw.at("c").get<double>();
  } else if (kind == "naive_adversary") {
    c = (static_cast<double>(n) - 6.0 * std::log(static_cast<double>(n))) /
        static_cast<double>(n);
  } else {
    c = 1.0 / 5626.0;
  }
  auto regime = boxlab::classify(dist, n, c, construction.profile);

  json doc = output_envelope(
      json{{"distribution", boxlab::to_json(dist)}, {"n", n}, {"overrides", ov}, {"c", c}}, 0);
  doc["construction"] = boxlab::to_json(construction);
  doc["regime"] = boxlab::to_json(regime);

  std::ostringstream text;
  text << kind << " at n=" << n << "\n" << doc["construction"].dump(2) << "\n"
       << "regime report at c=" << fmt6(c) << "\n" << doc["regime"].dump(2) << "\n";
  emit(opts, "construct-" + kind, doc, text.str());
  return 0;
}

int cmd_posterior(const std::string& dist_arg, double sigma, double y,
                  std::optional<double> truncate, const GlobalOptions& opts) {
  const auto dist = parse_dist_arg(dist_arg);
  boxlab::PosteriorResult r = truncate
                                  ? boxlab::truncated_posterior_mean(dist, *truncate, sigma, y)
                                  : boxlab::posterior_mean({dist, sigma, y});
  json doc = output_envelope(
      json{{"distribution", boxlab::to_json(dist)}, {"sigma", sigma}, {"y", y}}, 0);
  doc["value"] = r.value;
  doc["degenerate"] = r.degenerate;
  if (dist.kind() == boxlab::DistKind::half_normal && sigma > 0.0 && !truncate) {
    doc["closed_form"] = boxlab::halfnormal_posterior(dist.param(0), sigma, y);
    doc["upper_bound"] =
        boxlab::posterior_upper_bound_halfnormal(sigma / dist.param(0), y / dist.param(0)) *
        dist.param(0);
  }
  std::ostringstream text;
  text << fmt6(r.value) << (r.degenerate ? "  (degenerate: nearest support point)" : "") << "\n";
  emit(opts, "posterior", doc, text.str());
  return 0;
}

int cmd_order_stats(const std::string& dist_arg, std::size_t m, std::optional<double> alpha_m,
                    std::optional<double> beta_m, const GlobalOptions& opts) {
  const auto dist = parse_dist_arg(dist_arg);
  json doc = output_envelope(json{{"distribution", boxlab::to_json(dist)}, {"m", m}}, 0);
  std::ostringstream text;
  const double e_max = boxlab::expected_max(dist, m);
  doc["expected_max"] = e_max;
  text << fmt6(e_max) << "\n";
  if (alpha_m) {
    doc["alpha_quantile"] = boxlab::alpha_quantile(dist, *alpha_m);
    text << "alpha_" << fmt6(*alpha_m) << " = " << fmt6(doc["alpha_quantile"].get<double>())
         << "\n";
  }
  if (beta_m) {
    doc["beta_threshold"] = boxlab::beta_threshold(dist, *beta_m);
    text << "beta_" << fmt6(*beta_m) << " = " << fmt6(doc["beta_threshold"].get<double>())
         << "\n";
  }
  emit(opts, "order-stats", doc, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boxlab: policies and experiments for picking the best box from noisy estimates"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opts;
  app.add_option("--seed", opts.seed, "override the config seed");
  app.add_option("--trials", opts.trials, "override the config trial/sample count");
  app.add_option("--threads", opts.threads, "worker threads (0 = all cores)");
  app.add_option("--format", opts.format, "output format: text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", opts.out_dir, "directory for result files (created if absent)");

  std::string config_path, name, dist_arg;
  double sigma = 1.0, y = 0.0;
  std::optional<double> truncate, alpha_m, beta_m;
  std::size_t m = 1;

  auto* sim = app.add_subcommand("simulate", "run a policy experiment from a config file");
  sim->add_option("config", config_path, "experiment config (JSON)")->required();

  auto* sep = app.add_subcommand("separation", "run one of the named separation experiments");
  sep->add_option("name", name, "experiment name")
      ->required()
      ->check(CLI::IsMember(boxlab::separation_names()));
  sep->add_option("config", config_path, "separation config (JSON)")->required();

  auto* ver = app.add_subcommand("verify", "run the lemma verification suite");
  ver->add_option("config", config_path, "verify config (JSON)")->required();

  auto* con = app.add_subcommand("construct", "build an adversarial noise profile and classify it");
  con->add_option("kind", name, "construction kind")
      ->required()
      ->check(CLI::IsMember({"naive_adversary", "linear_adversary"}));
  con->add_option("config", config_path, "construction config (JSON)")->required();

  auto* post = app.add_subcommand("posterior", "spot-evaluate a posterior mean");
  post->add_option("--dist", dist_arg, "distribution JSON or kind name")->required();
  post->add_option("--sigma", sigma, "noise scale")->required();
  post->add_option("--y", y, "observation")->required();
  post->add_option("--truncate", truncate, "condition the reward on D <= V");

  auto* ostats = app.add_subcommand("order-stats", "expected maxima and threshold quantiles");
  ostats->add_option("--dist", dist_arg, "distribution JSON or kind name")->required();
  ostats->add_option("--m", m, "number of iid draws")->required();
  ostats->add_option("--alpha", alpha_m, "also print the (1-1/m)-quantile at this m");
  ostats->add_option("--beta", beta_m, "also print the tail-contribution threshold at this m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, opts);
    if (sep->parsed()) return cmd_separation(name, config_path, opts);
    if (ver->parsed()) return cmd_verify(config_path, opts);
    if (con->parsed()) return cmd_construct(name, config_path, opts);
    if (post->parsed()) return cmd_posterior(dist_arg, sigma, y, truncate, opts);
    if (ostats->parsed()) return cmd_order_stats(dist_arg, m, alpha_m, beta_m, opts);
  } catch (const boxlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const boxlab::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
