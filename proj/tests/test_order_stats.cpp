#include <doctest.h>

#include <cmath>
#include <vector>

#include "boxlab/errors.hpp"
#include "boxlab/normal.hpp"
#include "boxlab/order_stats.hpp"
#include "test_oracles.hpp"

using namespace boxlab;

TEST_CASE("expected_max closed forms") {
  const auto exp1 = RewardDistribution::exponential(1.0);
  CHECK(expected_max(exp1, 4) == doctest::Approx(25.0 / 12.0).epsilon(1e-14));  // H_4
  CHECK(expected_max(exp1, 100) == doctest::Approx(oracle::kHarmonic100).epsilon(1e-13));
  CHECK(expected_max(RewardDistribution::exponential(2.0), 4) ==
        doctest::Approx(25.0 / 24.0).epsilon(1e-14));

  // maximum of one draw is the mean, for every kind
  for (const auto& d : {RewardDistribution::exponential(1.3), RewardDistribution::half_normal(0.7),
                        RewardDistribution::two_point(2.0, 0.25),
                        RewardDistribution::uniform(0.0, 2.0), RewardDistribution::point_mass(4.0)})
    CHECK(expected_max(d, 1) == doctest::Approx(d.mean()).epsilon(1e-9));

  // two-point with p = 1/n, v = n at m = n = 10
  const auto tp = RewardDistribution::two_point(10.0, 0.1);
  CHECK(expected_max(tp, 10) == doctest::Approx(6.5132155989999991).epsilon(1e-13));

  CHECK(expected_max(RewardDistribution::point_mass(3.0), 17) == 3.0);
  CHECK(expected_max(RewardDistribution::uniform(0.0, 1.0), 4) == doctest::Approx(0.8));
}

TEST_CASE("expected_max for the half-normal: quadrature vs Simpson oracle") {
  const auto hn = RewardDistribution::half_normal(1.0);
  CHECK(expected_max(hn, 2) == doctest::Approx(oracle::kHalfNormalMax2).epsilon(1e-9));
  CHECK(expected_max(hn, 8) == doctest::Approx(oracle::kHalfNormalMax8).epsilon(1e-9));
  CHECK(expected_max(hn, 64) == doctest::Approx(oracle::kHalfNormalMax64).epsilon(1e-9));
  CHECK(expected_max(hn, 250) == doctest::Approx(oracle::kHalfNormalMax250).epsilon(1e-9));

  // published sandwich: (4/5) sqrt(ln 64) <= E[max 64] <= 3 sqrt(2) sqrt(ln 64)
  const double root = std::sqrt(std::log(64.0));
  CHECK(expected_max(hn, 64) >= 0.8 * root);
  CHECK(expected_max(hn, 64) <= 3.0 * std::sqrt(2.0) * root);

  // independent Simpson evaluation of the defining integral
  const double simpson = oracle::expected_max_simpson([&](double x) { return hn.cdf(x); }, 64, 8.0);
  CHECK(expected_max(hn, 64) == doctest::Approx(simpson).epsilon(1e-7));
}

TEST_CASE("alpha_quantile") {
  const auto exp1 = RewardDistribution::exponential(1.0);
  CHECK(alpha_quantile(exp1, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(alpha_quantile(RewardDistribution::point_mass(3.0), 100.0) == 3.0);
  CHECK(alpha_quantile(RewardDistribution::uniform(0.0, 1.0), 4.0) == doctest::Approx(0.75));
  CHECK_THROWS_AS(alpha_quantile(exp1, 1.0), std::invalid_argument);
}

TEST_CASE("beta_threshold") {
  const auto exp1 = RewardDistribution::exponential(1.0);
  SUBCASE("m = 1 is always zero") {
    for (const auto& d : {RewardDistribution::exponential(2.0), RewardDistribution::half_normal(1.0),
                          RewardDistribution::uniform(0.0, 1.0)})
      CHECK(beta_threshold(d, 1.0) == 0.0);
  }
  SUBCASE("point mass: the whole tail sits at v") {
    CHECK(beta_threshold(RewardDistribution::point_mass(5.0), 2.0) ==
          doctest::Approx(5.0).epsilon(1e-9));
  }
  SUBCASE("exponential m=10: root of (x+1)e^-x = 1/10") {
    CHECK(beta_threshold(exp1, 10.0) == doctest::Approx(oracle::kBetaExpM10).epsilon(1e-8));
  }
  SUBCASE("definition holds: T(beta) <= E/m < T(beta - eps)") {
    for (double m : {2.0, 10.0, 1000.0}) {
      const double b = beta_threshold(exp1, m);
      auto tail = [&](double x) { return x * (1.0 - exp1.cdf(x)) + exp1.tail_integral(x); };
      CHECK(tail(b) <= exp1.mean() / m * (1.0 + 1e-9));
      CHECK(tail(b * (1.0 - 1e-6)) >= exp1.mean() / m * (1.0 - 1e-5));
    }
  }
  SUBCASE("max law of the two-point hard instance: beta of D_{n:n} is v") {
    const std::size_t n = 1000;
    const auto tp = RewardDistribution::two_point(1000.0, 1e-3);
    const MaxLaw law(tp, n);
    CHECK(beta_threshold(law, 1e6) == doctest::Approx(1000.0).epsilon(1e-9));
  }
}

TEST_CASE("hazard profiles") {
  SUBCASE("exponential hazard is constant") {
    const auto d = RewardDistribution::exponential(2.0);
    std::vector<double> grid{0.1, 0.5, 1.0, 2.0, 4.0};
    auto h = hazard_profile(d, grid);
    CHECK(h.monotone);
    CHECK(h.rejected.empty());
    for (double v : h.hazard) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("half-normal hazard increases") {
    const auto d = RewardDistribution::half_normal(1.0);
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(0.05 + i * 0.1);
    auto h = hazard_profile(d, grid);
    CHECK(h.monotone);
    for (std::size_t i = 1; i < h.hazard.size(); ++i) CHECK(h.hazard[i] > h.hazard[i - 1]);
  }
  SUBCASE("tabulated heavy tail is rejected as MHR") {
    // Pareto(alpha=2, x_m=1): hazard alpha/x decreases.
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i) grid.push_back(1.0 + i * 0.25);
    auto pdf = [](double x) { return 2.0 / (x * x * x); };
    auto cdf = [](double x) { return 1.0 - 1.0 / (x * x); };
    auto h = hazard_profile(grid, pdf, cdf);
    CHECK_FALSE(h.monotone);
  }
  SUBCASE("undefined point is rejected with a diagnostic") {
    std::vector<double> grid{0.5, 2.0};
    auto pdf = [](double x) { return x < 1.0 ? 1.0 : 0.0; };
    auto cdf = [](double x) { return x < 1.0 ? x : 1.0; };
    auto h = hazard_profile(grid, pdf, cdf);
    REQUIRE(h.rejected.size() == 1);
    CHECK(h.rejected[0] == 1);
    CHECK(h.diagnostics.size() == 1);
  }
  SUBCASE("atomic kinds have no hazard") {
    std::vector<double> grid{0.5};
    CHECK_THROWS_AS(hazard_profile(RewardDistribution::two_point(1.0, 0.5), grid),
                    std::invalid_argument);
  }
}

TEST_CASE("mhr_verdict") {
  CHECK(mhr_verdict(RewardDistribution::exponential(1.0)));
  CHECK(mhr_verdict(RewardDistribution::half_normal(1.0)));
  CHECK(mhr_verdict(RewardDistribution::uniform(0.0, 1.0)));
  CHECK_FALSE(mhr_verdict(RewardDistribution::two_point(2.0, 0.5)));
  CHECK_FALSE(mhr_verdict(RewardDistribution::point_mass(1.0)));
}

TEST_CASE("normal helpers") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.0) == doctest::Approx(oracle::kPhi1).epsilon(1e-14));
  CHECK(normal_cdf(0.5) == doctest::Approx(oracle::kPhiHalf).epsilon(1e-14));
  CHECK(normal_pdf(1.0) == doctest::Approx(oracle::kPdf1).epsilon(1e-14));

  SUBCASE("quantile inverts the CDF to high accuracy") {
    for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
      const double x = normal_quantile(p);
      CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-11));
    }
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  }

  SUBCASE("mills ratio: direct region and asymptotic region agree at the seam") {
    const double a = mills_ratio(36.9);
    const double b = mills_ratio(37.1);
    CHECK(b > a);
    CHECK((b - a) / a < 1e-2);
    // against the defining formula where the tail is still representable
    for (double t : {-3.0, 0.0, 2.0, 8.0, 20.0})
      CHECK(mills_ratio(t) == doctest::Approx(normal_pdf(t) / normal_sf(t)).epsilon(1e-12));
    // far tail: ratio approaches t + 1/t
    CHECK(mills_ratio(100.0) == doctest::Approx(100.0 + 1.0 / 100.0).epsilon(1e-4));
  }
}

TEST_CASE("gordon_bounds sandwich Phi") {
  for (int i = 1; i <= 10000; ++i) {
    const double t = 10.0 * i / 10000.0;
    const auto b = gordon_bounds(t);
    const double v = normal_cdf(t);
    CHECK(b.lower <= v);
    CHECK(v <= b.upper);
  }
  const auto b1 = gordon_bounds(1.0);
  CHECK(b1.lower == doctest::Approx(1.0 - oracle::kPdf1).epsilon(1e-14));
  CHECK(b1.upper == doctest::Approx(1.0 - oracle::kPdf1 / 2.0).epsilon(1e-14));
  const auto b8 = gordon_bounds(8.0);
  CHECK(1.0 - b8.lower < 1e-14);
  CHECK(1.0 - b8.upper < 1e-14);
  CHECK_THROWS_AS(gordon_bounds(0.0), std::invalid_argument);
}

TEST_CASE("gaussian_max_tail") {
  CHECK(gaussian_max_tail(1, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gaussian_max_tail(1, 1.0, 1.0) == doctest::Approx(oracle::kPhi1).epsilon(1e-13));
  CHECK(gaussian_max_tail(5, 2.0, 0.0) == doctest::Approx(0.03125).epsilon(1e-13));
  CHECK(gaussian_max_tail(1000000000, 1.0, 10.0) ==
        doctest::Approx(std::exp(1e9 * std::log1p(-normal_sf(10.0)))).epsilon(1e-10));
  CHECK_THROWS_AS(gaussian_max_tail(0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_max_tail(1, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("order-statistic ratio monotonicity: E[D_{a:a}]/a >= E[D_{b:b}]/b") {
  for (const auto& d : {RewardDistribution::exponential(1.0), RewardDistribution::half_normal(1.0),
                        RewardDistribution::two_point(4.0, 0.3),
                        RewardDistribution::uniform(0.0, 1.0)}) {
    CAPTURE(d.describe());
    double prev = d.mean();  // a = 1
    for (std::size_t b = 2; b <= 1024; b *= 2) {
      const double cur = expected_max(d, b) / static_cast<double>(b);
      CHECK(cur <= prev * (1.0 + 1e-9));
      prev = cur;
    }
  }
}

TEST_CASE("MHR quantile sandwich: E[max]/3 <= alpha_n <= 5 E[max]/4") {
  for (const auto& d : {RewardDistribution::exponential(1.0), RewardDistribution::half_normal(1.0)}) {
    CAPTURE(d.describe());
    for (std::size_t n = 4; n <= 256; n *= 2) {
      const double e = expected_max(d, n);
      const double a = alpha_quantile(d, static_cast<double>(n));
      CHECK(e / 3.0 <= a * (1.0 + 1e-9));
      CHECK(a <= 1.25 * e * (1.0 + 1e-9));
    }
  }
}
