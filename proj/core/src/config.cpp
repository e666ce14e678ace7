#include "boxlab/config.hpp"

#include <algorithm>

#include "boxlab/errors.hpp"

namespace boxlab {

namespace {

double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  if (!j.at(key).is_number()) throw ConfigError(where + ": \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

std::uint64_t get_count(const json& j, const char* key, std::uint64_t fallback,
                        const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_unsigned())
    throw ConfigError(where + ": \"" + key + "\" must be a non-negative integer");
  return j.at(key).get<std::uint64_t>();
}

}  // namespace

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return it.key() == k; }) == allowed.end())
      throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
  }
}

json to_json(const RewardDistribution& dist) {
  switch (dist.kind()) {
    case DistKind::exponential:
      return {{"kind", "exponential"}, {"rate", dist.param(0)}};
    case DistKind::half_normal:
      return {{"kind", "half_normal"}, {"scale", dist.param(0)}};
    case DistKind::two_point:
      return {{"kind", "two_point"}, {"value", dist.param(0)}, {"prob", dist.param(1)}};
    case DistKind::uniform:
      return {{"kind", "uniform"}, {"lo", dist.param(0)}, {"hi", dist.param(1)}};
    case DistKind::point_mass:
      return {{"kind", "point_mass"}, {"value", dist.param(0)}};
  }
  throw ConfigError("to_json: unknown distribution kind");
}

RewardDistribution distribution_from_json(const json& j) {
  const std::string where = "distribution";
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError(where + ": expected {\"kind\": ..., params}");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exponential") {
    require_keys(j, {"kind", "rate"}, where);
    return RewardDistribution::exponential(get_number(j, "rate", where));
  }
  if (kind == "half_normal" || kind == "halfnormal") {
    require_keys(j, {"kind", "scale"}, where);
    return RewardDistribution::half_normal(j.contains("scale") ? get_number(j, "scale", where)
                                                               : 1.0);
  }
  if (kind == "two_point") {
    require_keys(j, {"kind", "value", "prob"}, where);
    return RewardDistribution::two_point(get_number(j, "value", where),
                                         get_number(j, "prob", where));
  }
  if (kind == "uniform") {
    require_keys(j, {"kind", "lo", "hi"}, where);
    return RewardDistribution::uniform(get_number(j, "lo", where), get_number(j, "hi", where));
  }
  if (kind == "point_mass") {
    require_keys(j, {"kind", "value"}, where);
    return RewardDistribution::point_mass(get_number(j, "value", where));
  }
  throw ConfigError(where + ": unknown kind \"" + kind + "\"");
}

namespace {

json gamma_to_json(const GammaSpec& g) {
  if (const auto* c = std::get_if<GammaConstant>(&g))
    return {{"type", "constant"}, {"value", c->value}};
  if (const auto* q = std::get_if<GammaQuantileRule>(&g))
    return {{"type", "quantile_rule"},
            {"y_quantile", q->y_quantile},
            {"sigma_quantile", q->sigma_quantile}};
  const auto& t = std::get<GammaTable>(g);
  const char* stat = nullptr;
  switch (t.stat) {
    case GammaTable::Stat::mean_y: stat = "mean_y"; break;
    case GammaTable::Stat::max_y: stat = "max_y"; break;
    case GammaTable::Stat::mean_sigma: stat = "mean_sigma"; break;
    case GammaTable::Stat::max_sigma: stat = "max_sigma"; break;
  }
  return {{"type", "table"}, {"stat", stat}, {"knots", t.knots}, {"values", t.values}};
}

GammaSpec gamma_from_json(const json& j) {
  const std::string where = "gamma";
  if (!j.is_object() || !j.contains("type")) throw ConfigError(where + ": expected {\"type\": ...}");
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") {
    require_keys(j, {"type", "value"}, where);
    return GammaConstant{get_number(j, "value", where)};
  }
  if (type == "quantile_rule") {
    require_keys(j, {"type", "y_quantile", "sigma_quantile"}, where);
    return GammaQuantileRule{get_number(j, "y_quantile", where),
                             get_number(j, "sigma_quantile", where)};
  }
  if (type == "table") {
    require_keys(j, {"type", "stat", "knots", "values"}, where);
    GammaTable t;
    const std::string stat = j.at("stat").get<std::string>();
    if (stat == "mean_y") t.stat = GammaTable::Stat::mean_y;
    else if (stat == "max_y") t.stat = GammaTable::Stat::max_y;
    else if (stat == "mean_sigma") t.stat = GammaTable::Stat::mean_sigma;
    else if (stat == "max_sigma") t.stat = GammaTable::Stat::max_sigma;
    else throw ConfigError(where + ": unknown stat \"" + stat + "\"");
    t.knots = j.at("knots").get<std::vector<double>>();
    t.values = j.at("values").get<std::vector<double>>();
    if (t.knots.size() != t.values.size() || t.knots.empty())
      throw ConfigError(where + ": knots/values must be non-empty and equal length");
    if (!std::is_sorted(t.knots.begin(), t.knots.end()))
      throw ConfigError(where + ": knots must be ascending");
    return t;
  }
  throw ConfigError(where + ": unknown type \"" + type + "\"");
}

}  // namespace

json to_json(const PolicySpec& spec) {
  json j;
  switch (spec.kind) {
    case PolicySpec::Kind::naive: j["policy"] = "naive"; break;
    case PolicySpec::Kind::linear_fixed:
      j["policy"] = "linear_fixed";
      j["c"] = spec.c;
      break;
    case PolicySpec::Kind::linear_gamma:
      j["policy"] = "linear_gamma";
      j["gamma"] = gamma_to_json(spec.gamma);
      break;
    case PolicySpec::Kind::ignore_large: j["policy"] = "ignore_large"; break;
    case PolicySpec::Kind::ignore_large_exp: j["policy"] = "ignore_large_exp"; break;
    case PolicySpec::Kind::opt: j["policy"] = "opt"; break;
    case PolicySpec::Kind::random: j["policy"] = "random"; break;
    case PolicySpec::Kind::prefix:
      j["policy"] = "prefix";
      if (spec.prefix_count) j["count"] = *spec.prefix_count;
      else j["count"] = "exact";
      break;
  }
  if (spec.force_alpha) j["force_alpha"] = *spec.force_alpha;
  return j;
}

PolicySpec policy_from_json(const json& j) {
  const std::string where = "policy";
  if (!j.is_object() || !j.contains("policy"))
    throw ConfigError(where + ": expected {\"policy\": ...}");
  const std::string name = j.at("policy").get<std::string>();
  PolicySpec spec;
  if (name == "naive") {
    require_keys(j, {"policy"}, where);
    spec.kind = PolicySpec::Kind::naive;
  } else if (name == "linear_fixed") {
    require_keys(j, {"policy", "c"}, where);
    spec.kind = PolicySpec::Kind::linear_fixed;
    spec.c = get_number(j, "c", where);
  } else if (name == "linear_gamma") {
    require_keys(j, {"policy", "gamma"}, where);
    spec.kind = PolicySpec::Kind::linear_gamma;
    if (!j.contains("gamma")) throw ConfigError(where + ": linear_gamma needs \"gamma\"");
    spec.gamma = gamma_from_json(j.at("gamma"));
  } else if (name == "ignore_large" || name == "ignore_large_exp") {
    require_keys(j, {"policy", "force_alpha"}, where);
    spec.kind = name == "ignore_large" ? PolicySpec::Kind::ignore_large
                                       : PolicySpec::Kind::ignore_large_exp;
    if (j.contains("force_alpha")) spec.force_alpha = get_number(j, "force_alpha", where);
  } else if (name == "opt") {
    require_keys(j, {"policy"}, where);
    spec.kind = PolicySpec::Kind::opt;
  } else if (name == "random") {
    require_keys(j, {"policy"}, where);
    spec.kind = PolicySpec::Kind::random;
  } else if (name == "prefix") {
    require_keys(j, {"policy", "count"}, where);
    spec.kind = PolicySpec::Kind::prefix;
    if (j.contains("count") && j.at("count").is_number_unsigned())
      spec.prefix_count = j.at("count").get<std::size_t>();
    else if (j.contains("count") && j.at("count") == "exact")
      spec.prefix_count = std::nullopt;
    else
      throw ConfigError(where + ": prefix needs \"count\": <int> or \"exact\"");
  } else {
    throw ConfigError(where + ": unknown policy \"" + name + "\"");
  }
  return spec;
}

json to_json(const RegimeReport& r) {
  return {{"n", r.n},
          {"c", r.c},
          {"mhr", r.mhr},
          {"pivot_cn", r.pivot_cn},
          {"pivot_nc", r.pivot_nc},
          {"sigma_at_cn", r.sigma_at_cn},
          {"sigma_at_nc", r.sigma_at_nc},
          {"small_threshold", r.small_threshold},
          {"small_mhr_threshold", r.small_mhr_threshold},
          {"medium_threshold", r.medium_threshold},
          {"large_threshold", r.large_noise_classifiable ? json(r.large_threshold) : json()},
          {"small_noise", r.small_noise},
          {"small_noise_mhr", r.small_noise_mhr},
          {"medium_noise", r.medium_noise},
          {"large_noise", r.large_noise_classifiable ? json(r.large_noise) : json("unclassifiable")}};
}

namespace {

json naive_overrides_to_json(const NaiveAdversaryOverrides& ov) {
  json j = json::object();
  if (ov.noisy_count) j["noisy_count"] = *ov.noisy_count;
  if (ov.sigma_big) j["sigma_big"] = *ov.sigma_big;
  return j;
}

json linear_overrides_to_json(const LinearAdversaryOverrides& ov) {
  json j = json::object();
  if (ov.small_count) j["small_count"] = *ov.small_count;
  if (ov.alpha_exponent) j["alpha_exponent"] = *ov.alpha_exponent;
  if (ov.sigma_small) j["sigma_small"] = *ov.sigma_small;
  if (ov.sigma_big) j["sigma_big"] = *ov.sigma_big;
  return j;
}

NaiveAdversaryOverrides naive_overrides_from_json(const json& j) {
  require_keys(j, {"noisy_count", "sigma_big"}, "naive_adversary overrides");
  NaiveAdversaryOverrides ov;
  if (j.contains("noisy_count")) ov.noisy_count = j.at("noisy_count").get<std::size_t>();
  if (j.contains("sigma_big")) ov.sigma_big = j.at("sigma_big").get<double>();
  return ov;
}

LinearAdversaryOverrides linear_overrides_from_json(const json& j) {
  require_keys(j, {"small_count", "alpha_exponent", "sigma_small", "sigma_big"},
               "linear_adversary overrides");
  LinearAdversaryOverrides ov;
  if (j.contains("small_count")) ov.small_count = j.at("small_count").get<std::size_t>();
  if (j.contains("alpha_exponent")) ov.alpha_exponent = j.at("alpha_exponent").get<double>();
  if (j.contains("sigma_small")) ov.sigma_small = j.at("sigma_small").get<double>();
  if (j.contains("sigma_big")) ov.sigma_big = j.at("sigma_big").get<double>();
  return ov;
}

json profile_summary(const NoiseProfile& profile) {
  json out = json::array();
  const auto vals = profile.values();
  for (std::size_t i = 0; i < vals.size();) {
    std::size_t j = i;
    while (j < vals.size() && vals[j] == vals[i]) ++j;
    out.push_back({{"sigma", vals[i]}, {"count", j - i}});
    i = j;
  }
  return out;
}

}  // namespace

json to_json(const AdversarialConstruction& c) {
  json j{{"kind", c.kind}, {"n", c.n}, {"profile_summary", profile_summary(c.profile)}};
  if (c.kind == "naive_adversary") {
    j["noisy_count"] = c.noisy_count;
    j["sigma_big"] = c.sigma_big;
    j["beta"] = c.beta_used;
    j["overrides"] = naive_overrides_to_json(c.naive_overrides);
  } else {
    j["small_count"] = c.noisy_count;
    j["sigma_small"] = c.sigma_small;
    j["sigma_big"] = c.sigma_big;
    j["theta_star"] = c.theta_star;
    j["alpha"] = c.alpha_used;
    j["overrides"] = linear_overrides_to_json(c.linear_overrides);
  }
  return j;
}

NoiseProfile NoiseSpec::build(const RewardDistribution& dist) const {
  if (sigma) return NoiseProfile(*sigma);
  if (!construction) throw ConfigError("noise: need \"sigma\" or \"construction\"");
  if (!n) throw ConfigError("noise: constructions need \"n\"");
  if (*construction == "naive_adversary")
    return construct_naive_adversary(dist, *n, naive_overrides).profile;
  if (*construction == "linear_adversary")
    return construct_linear_adversary(dist, *n, linear_overrides).profile;
  throw ConfigError("noise: unknown construction \"" + *construction + "\"");
}

json to_json(const NoiseSpec& spec) {
  json j = json::object();
  if (spec.sigma) j["sigma"] = *spec.sigma;
  if (spec.construction) {
    j["construction"] = *spec.construction;
    j["n"] = *spec.n;
    j["overrides"] = *spec.construction == "naive_adversary"
                         ? naive_overrides_to_json(spec.naive_overrides)
                         : linear_overrides_to_json(spec.linear_overrides);
  }
  return j;
}

NoiseSpec noise_from_json(const json& j) {
  require_keys(j, {"sigma", "construction", "n", "overrides"}, "noise");
  NoiseSpec spec;
  if (j.contains("sigma")) spec.sigma = j.at("sigma").get<std::vector<double>>();
  if (j.contains("construction")) {
    spec.construction = j.at("construction").get<std::string>();
    if (j.contains("n")) spec.n = j.at("n").get<std::size_t>();
    const json ov = j.contains("overrides") ? j.at("overrides") : json::object();
    if (*spec.construction == "naive_adversary")
      spec.naive_overrides = naive_overrides_from_json(ov);
    else if (*spec.construction == "linear_adversary")
      spec.linear_overrides = linear_overrides_from_json(ov);
    else
      throw ConfigError("noise: unknown construction \"" + *spec.construction + "\"");
  }
  if (!spec.sigma && !spec.construction)
    throw ConfigError("noise: need \"sigma\" or \"construction\"");
  return spec;
}

json to_json(const ExperimentConfig& config) {
  json policies = json::array();
  for (const auto& p : config.policies) policies.push_back(to_json(p));
  json benchmarks = json::array();
  if (config.benchmark_prophet) benchmarks.push_back("prophet");
  if (config.benchmark_random) benchmarks.push_back("random");
  return {{"distribution", to_json(config.dist)}, {"noise", to_json(config.noise)},
          {"policies", policies},               {"trials", config.trials},
          {"seed", config.seed},                {"benchmarks", benchmarks}};
}

ExperimentConfig experiment_from_json(const json& j) {
  require_keys(j, {"distribution", "noise", "policies", "trials", "seed", "benchmarks"},
               "experiment");
  if (!j.contains("distribution") || !j.contains("noise") || !j.contains("policies"))
    throw ConfigError("experiment: need distribution, noise and policies");
  ExperimentConfig config{.dist = distribution_from_json(j.at("distribution")),
                          .noise = noise_from_json(j.at("noise")),
                          .policies = {},
                          .trials = get_count(j, "trials", 1000, "experiment"),
                          .seed = get_count(j, "seed", 1, "experiment")};
  if (config.trials < 1) throw ConfigError("experiment: trials must be >= 1");
  for (const auto& p : j.at("policies")) config.policies.push_back(policy_from_json(p));
  if (config.policies.empty()) throw ConfigError("experiment: need at least one policy");
  if (j.contains("benchmarks")) {
    config.benchmark_prophet = false;
    config.benchmark_random = false;
    for (const auto& b : j.at("benchmarks")) {
      if (b == "prophet") config.benchmark_prophet = true;
      else if (b == "random") config.benchmark_random = true;
      else throw ConfigError("experiment: unknown benchmark " + b.dump());
    }
  }
  return config;
}

json to_json(const SeparationConfig& config) {
  return {{"distribution", to_json(config.dist)},
          {"ns", config.ns},
          {"trials", config.trials},
          {"seed", config.seed},
          {"scale_two_point_with_n", config.scale_two_point_with_n},
          {"cs_exponent", config.cs_exponent},
          {"alpha_exponent", config.alpha_exponent},
          {"c_grid_points", config.c_grid_points},
          {"c_grid_min", config.c_grid_min},
          {"cs", config.cs},
          {"sigma_multiplier", config.sigma_multiplier},
          {"cn", config.cn},
          {"c", config.c},
          {"sigma_big_factor", config.sigma_big_factor}};
}

SeparationConfig separation_from_json(const json& j) {
  require_keys(j,
               {"distribution", "ns", "n", "trials", "seed", "scale_two_point_with_n",
                "cs_exponent", "alpha_exponent", "c_grid_points", "c_grid_min", "cs",
                "sigma_multiplier", "cn", "c", "sigma_big_factor"},
               "separation");
  SeparationConfig config;
  if (j.contains("distribution")) config.dist = distribution_from_json(j.at("distribution"));
  if (j.contains("ns")) config.ns = j.at("ns").get<std::vector<std::size_t>>();
  if (j.contains("n")) config.ns = {j.at("n").get<std::size_t>()};
  config.trials = get_count(j, "trials", config.trials, "separation");
  config.seed = get_count(j, "seed", config.seed, "separation");
  if (j.contains("scale_two_point_with_n"))
    config.scale_two_point_with_n = j.at("scale_two_point_with_n").get<bool>();
  if (j.contains("cs_exponent")) config.cs_exponent = j.at("cs_exponent").get<double>();
  if (j.contains("alpha_exponent")) config.alpha_exponent = j.at("alpha_exponent").get<double>();
  if (j.contains("c_grid_points")) config.c_grid_points = j.at("c_grid_points").get<std::size_t>();
  if (j.contains("c_grid_min")) config.c_grid_min = j.at("c_grid_min").get<double>();
  if (j.contains("cs")) config.cs = j.at("cs").get<std::vector<double>>();
  if (j.contains("sigma_multiplier")) config.sigma_multiplier = j.at("sigma_multiplier").get<double>();
  if (j.contains("cn")) config.cn = j.at("cn").get<double>();
  if (j.contains("c")) config.c = j.at("c").get<double>();
  if (j.contains("sigma_big_factor")) config.sigma_big_factor = j.at("sigma_big_factor").get<double>();
  return config;
}

json to_json(const VerifyConfig& config) {
  json dists = json::array();
  for (const auto& d : config.dists) dists.push_back(to_json(d));
  return {{"distributions", dists},
          {"suite", config.suite},
          {"n_grid", config.n_grid},
          {"mc_samples", config.mc_samples},
          {"seed", config.seed}};
}

VerifyConfig verify_from_json(const json& j) {
  require_keys(j, {"distributions", "suite", "n_grid", "mc_samples", "seed"}, "verify");
  VerifyConfig config;
  if (j.contains("distributions")) {
    config.dists.clear();
    for (const auto& d : j.at("distributions")) config.dists.push_back(distribution_from_json(d));
  }
  if (j.contains("suite")) config.suite = j.at("suite").get<std::vector<std::string>>();
  if (j.contains("n_grid")) config.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
  config.mc_samples = get_count(j, "mc_samples", config.mc_samples, "verify");
  config.seed = get_count(j, "seed", config.seed, "verify");
  return config;
}

}  // namespace boxlab
