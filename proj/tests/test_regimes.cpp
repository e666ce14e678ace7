#include <doctest.h>

#include <cmath>

#include "boxlab/errors.hpp"
#include "boxlab/order_stats.hpp"
#include "boxlab/regimes.hpp"

using namespace boxlab;

TEST_CASE("classify basic memberships") {
  const auto d = RewardDistribution::exponential(1.0);
  SUBCASE("all-zero noise is small noise and never large noise") {
    const std::size_t n = 100;
    NoiseProfile p(std::vector<double>(n, 0.0));
    auto r = classify(d, n, 0.5, p);
    CHECK(r.small_noise);
    CHECK(r.small_noise_mhr);
    CHECK_FALSE(r.medium_noise);
    CHECK_FALSE(r.large_noise);
    CHECK(r.large_noise_classifiable);
  }
  SUBCASE("astronomically noisy profile is large noise, not small") {
    const std::size_t n = 100;
    const double big = 1e9 * expected_max(d, n);
    NoiseProfile p(std::vector<double>(n, big));
    auto r = classify(d, n, 0.5, p);
    CHECK_FALSE(r.small_noise);
    CHECK(r.large_noise);
    CHECK(r.medium_noise);
  }
  SUBCASE("c out of range") {
    NoiseProfile p(std::vector<double>(10, 0.0));
    CHECK_THROWS_AS(classify(d, 10, 0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(classify(d, 10, 1.5, p), std::invalid_argument);
  }
  SUBCASE("cn < 3 is unclassifiable for large noise") {
    const std::size_t n = 100;
    NoiseProfile p(std::vector<double>(n, 1.0));
    auto r = classify(d, n, 0.02, p);  // cn = 2
    CHECK_FALSE(r.large_noise_classifiable);
    CHECK_FALSE(r.large_noise);
  }
  SUBCASE("small_noise_mhr is only reported for MHR distributions") {
    const auto tp = RewardDistribution::two_point(10.0, 0.1);
    const std::size_t n = 100;
    NoiseProfile p(std::vector<double>(n, 0.0));
    auto r = classify(tp, n, 0.5, p);
    CHECK_FALSE(r.mhr);
    CHECK_FALSE(r.small_noise_mhr);
    CHECK(r.small_noise);
  }
}

TEST_CASE("naive adversary construction") {
  SUBCASE("structure at n = 1000 for the hard two-point instance") {
    const std::size_t n = 1000;
    const auto d = RewardDistribution::two_point(1000.0, 1e-3);
    auto c = construct_naive_adversary(d, n);
    const std::size_t big = static_cast<std::size_t>(std::llround(6.0 * std::log(1000.0)));
    CHECK(c.noisy_count == big);  // 41
    CHECK(c.profile.size() == n);
    CHECK(c.profile.exact_count() == n - big);
    // beta of the max law of the two-point instance is the atom value
    CHECK(c.beta_used == doctest::Approx(1000.0).epsilon(1e-8));
    CHECK(c.sigma_big == doctest::Approx(6.0 * 1000.0 * std::sqrt(std::log(1000.0))).epsilon(1e-8));
    // sorted: zeros first then sigma_big
    CHECK(c.profile.sigma(0) == 0.0);
    CHECK(c.profile.sigma(n - 1) == c.sigma_big);
  }
  SUBCASE("n = 10 is undefined: round(6 ln 10) = 14 >= 10") {
    CHECK_THROWS_AS(construct_naive_adversary(RewardDistribution::exponential(1.0), 10),
                    std::invalid_argument);
  }
  SUBCASE("n = 10^4 on the exponential gives 55 noisy boxes") {
    auto c = construct_naive_adversary(RewardDistribution::exponential(1.0), 10000);
    CHECK(c.noisy_count == 55);  // round(6 ln 10^4) = round(55.26)
  }
  SUBCASE("overrides are applied and echoed") {
    NaiveAdversaryOverrides ov;
    ov.noisy_count = 5;
    ov.sigma_big = 123.0;
    auto c = construct_naive_adversary(RewardDistribution::exponential(1.0), 100, ov);
    CHECK(c.noisy_count == 5);
    CHECK(c.sigma_big == 123.0);
    CHECK(c.naive_overrides.noisy_count == 5);
    CHECK(c.naive_overrides.sigma_big == 123.0);
  }
  SUBCASE("membership: the constructed profile is small noise at c = (n - 6 ln n)/n") {
    const std::size_t n = 1000;
    const auto d = RewardDistribution::two_point(1000.0, 1e-3);
    auto c = construct_naive_adversary(d, n);
    const double cc =
        (static_cast<double>(n) - 6.0 * std::log(static_cast<double>(n))) / static_cast<double>(n);
    auto r = classify(d, n, cc, c.profile);
    CHECK(r.small_noise);
  }
}

TEST_CASE("linear adversary construction") {
  const auto d = RewardDistribution::exponential(1.0);
  SUBCASE("paper constants at desk scale: one small-noise box") {
    auto c = construct_linear_adversary(d, 10000);
    CHECK(c.noisy_count == 1);  // round(n^(1/5626)) = 1
    CHECK(c.profile.sigma(0) == 0.0);
    CHECK(c.profile.sigma(1) == doctest::Approx(c.sigma_small));
    CHECK(c.profile.sigma(2) == doctest::Approx(c.sigma_big));
    CHECK(c.sigma_big > c.theta_star * c.sigma_small);
    CHECK(c.theta_star == doctest::Approx(std::sqrt(std::log(10000.0) / 2.0)));
  }
  SUBCASE("scaled overrides: c_s = round(n^0.3), alpha subscript n^0.5") {
    const std::size_t n = 10000;
    LinearAdversaryOverrides ov;
    ov.small_count = 16;
    ov.alpha_exponent = 0.5;
    auto c = construct_linear_adversary(d, n, ov);
    CHECK(c.noisy_count == 16);
    // sigma_s = (37/(9 sqrt 2)) H_16 / sqrt(ln n)
    const double expect_s =
        37.0 / (9.0 * std::sqrt(2.0)) * harmonic_number(16) / std::sqrt(std::log(1e4));
    CHECK(c.sigma_small == doctest::Approx(expect_s).epsilon(1e-12));
    // alpha subscript: quantile of the max law of n - c_s draws at 1 - 1/sqrt(n)
    const MaxLaw law(d, n - 16);
    const double expect_alpha = alpha_quantile(law, 100.0);
    CHECK(c.alpha_used == doctest::Approx(expect_alpha).epsilon(1e-12));
    CHECK(c.sigma_big == doctest::Approx(6.0 * expect_alpha * std::sqrt(std::log(1e4))));
    CHECK(c.sigma_big > c.theta_star * c.sigma_small);
    // profile shape: 1 exact + 16 small + n-17 big
    CHECK(c.profile.exact_count() == 1);
    CHECK(c.profile.sigma(1) == doctest::Approx(c.sigma_small));
    CHECK(c.profile.sigma(16) == doctest::Approx(c.sigma_small));
    CHECK(c.profile.sigma(17) == doctest::Approx(c.sigma_big));
  }
  SUBCASE("requires an MHR distribution") {
    CHECK_THROWS_AS(construct_linear_adversary(RewardDistribution::two_point(2.0, 0.5), 100),
                    std::invalid_argument);
  }
  SUBCASE("c_s + 2 > n is rejected") {
    LinearAdversaryOverrides ov;
    ov.small_count = 99;
    CHECK_THROWS_AS(construct_linear_adversary(d, 100, ov), std::invalid_argument);
  }
  SUBCASE("membership with paper constants: small-noise-MHR at c = 1/5626") {
    // Only the quantile comparison matters; verify the defining inequality
    // directly (the pivot at round(n^c) = 1 is the exact box).
    const std::size_t n = 10000;
    auto c = construct_linear_adversary(d, n);
    auto r = classify(d, n, 1.0 / 5626.0, c.profile);
    CHECK(r.mhr);
    CHECK(r.small_noise_mhr);
  }
}
