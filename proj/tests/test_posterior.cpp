#include <doctest.h>

#include <cmath>

#include "boxlab/normal.hpp"
#include "boxlab/posterior.hpp"
#include "test_oracles.hpp"

using namespace boxlab;

TEST_CASE("half-normal closed form matches frozen references") {
  CHECK(posterior_mean_halfnormal(1.0, 0.0) ==
        doctest::Approx(oracle::kPosteriorHalfNormS1Y0).epsilon(1e-13));
  CHECK(posterior_mean_halfnormal(1.0, 1.0) ==
        doctest::Approx(oracle::kPosteriorHalfNormS1Y1).epsilon(1e-13));
  CHECK(posterior_mean_halfnormal(2.0, 10.0) ==
        doctest::Approx(oracle::kPosteriorHalfNormS2Y10).epsilon(1e-13));
  CHECK(posterior_mean_halfnormal(0.1, 1.0) ==
        doctest::Approx(oracle::kPosteriorHalfNormS01Y1).epsilon(1e-12));
  // y large: the mills correction vanishes, leaving y/(sigma^2+1)
  CHECK(posterior_mean_halfnormal(1.0, 50.0) == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("quadrature engine matches closed forms") {
  const auto hn = RewardDistribution::half_normal(1.0);
  SUBCASE("half-normal across the (sigma, y) grid, 1e-6 absolute") {
    for (double sigma : {0.1, 0.5, 1.0, 2.0, 10.0}) {
      for (double y = -10.0; y <= 10.0; y += 0.5) {
        CAPTURE(sigma);
        CAPTURE(y);
        const double closed = posterior_mean_halfnormal(sigma, y);
        const double quad = posterior_mean({hn, sigma, y}).value;
        CHECK(std::abs(closed - quad) < 1e-6);
      }
    }
  }
  SUBCASE("exponential prior: truncated-normal closed form") {
    const auto exp1 = RewardDistribution::exponential(1.0);
    CHECK(posterior_mean({exp1, 1.0, 0.0}).value ==
          doctest::Approx(oracle::kPosteriorExpS1Y0).epsilon(1e-8));
    CHECK(posterior_mean({exp1, 1.0, 2.0}).value ==
          doctest::Approx(oracle::kPosteriorExpS1Y2).epsilon(1e-8));
    CHECK(posterior_mean({exp1, 3.0, 0.0}).value ==
          doctest::Approx(oracle::kPosteriorExpS3Y0).epsilon(1e-8));
  }
  SUBCASE("scaled half-normal via the affine wrapper") {
    const auto hn3 = RewardDistribution::half_normal(3.0);
    for (double y : {-2.0, 0.0, 1.0, 7.5}) {
      CHECK(posterior_mean({hn3, 2.0, y}).value ==
            doctest::Approx(halfnormal_posterior(3.0, 2.0, y)).epsilon(1e-6));
    }
  }
}

TEST_CASE("discrete priors use exact atom sums") {
  SUBCASE("symmetric two-point likelihoods cancel") {
    const auto d = RewardDistribution::two_point(2.0, 0.5);
    CHECK(posterior_mean({d, 1.0, 1.0}).value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("far observation collapses onto the nearer atom") {
    const auto d = RewardDistribution::two_point(2.0, 0.5);
    CHECK(posterior_mean({d, 0.1, 2.0}).value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(posterior_mean({d, 0.1, -5.0}).value == doctest::Approx(0.0).epsilon(1e-9));
    // extreme drift: exact sums survive where naive weights underflow
    CHECK(posterior_mean({d, 0.05, 1000.0}).value == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("point mass posterior is the point") {
    const auto d = RewardDistribution::point_mass(0.5);
    for (double y : {-100.0, 0.0, 3.0}) CHECK(posterior_mean({d, 3.0, y}).value == 0.5);
  }
}

TEST_CASE("sigma = 0 returns the exact observation inside the support") {
  const auto u = RewardDistribution::uniform(0.0, 1.0);
  CHECK(posterior_mean({u, 0.0, 0.25}).value == 0.25);
  CHECK_THROWS_AS(posterior_mean({u, 0.0, 2.0}), std::invalid_argument);
  const auto d = RewardDistribution::two_point(2.0, 0.5);
  CHECK(posterior_mean({d, 0.0, 2.0}).value == 2.0);
  CHECK_THROWS_AS(posterior_mean({d, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("sigma -> 0 limit approaches the observation for continuous priors") {
  for (const auto& d : {RewardDistribution::exponential(1.0), RewardDistribution::half_normal(1.0),
                        RewardDistribution::uniform(0.0, 1.0)}) {
    CAPTURE(d.describe());
    const double y = 0.7;
    CHECK(posterior_mean({d, 1e-3, y}).value == doctest::Approx(y).epsilon(1e-2));
  }
}

TEST_CASE("posterior is monotone non-decreasing in y") {
  for (const auto& d : {RewardDistribution::exponential(1.0), RewardDistribution::half_normal(1.0),
                        RewardDistribution::uniform(0.0, 1.0),
                        RewardDistribution::two_point(2.0, 0.5)}) {
    for (double sigma : {0.1, 1.0, 10.0}) {
      CAPTURE(d.describe());
      CAPTURE(sigma);
      double prev = -1e300, scale = 1.0;
      for (int i = 0; i < 200; ++i) {
        const double y = -3.0 * sigma + (3.0 + 6.0 * sigma) * i / 199.0;
        const double v = posterior_mean({d, sigma, y}).value;
        scale = std::max(scale, std::abs(v));
        CHECK(v >= prev - 1e-7 * scale);
        prev = v;
      }
    }
  }
}

TEST_CASE("posterior stays inside the convex hull of the support") {
  for (const auto& d : {RewardDistribution::uniform(0.25, 0.75),
                        RewardDistribution::two_point(2.0, 0.5)}) {
    for (double sigma : {0.3, 2.0}) {
      for (double y : {-4.0, 0.0, 0.5, 1.0, 6.0}) {
        const double v = posterior_mean({d, sigma, y}).value;
        CHECK(v >= d.support_lo() - 1e-9);
        CHECK(v <= d.support_hi() + 1e-9);
      }
    }
  }
}

TEST_CASE("upper bound dominates the half-normal posterior") {
  CHECK(posterior_upper_bound_halfnormal(1.0, 0.0) ==
        doctest::Approx(kSqrt2OverPi).epsilon(1e-14));
  CHECK(posterior_upper_bound_halfnormal(1.0, -5.0) ==
        doctest::Approx(kSqrt2OverPi).epsilon(1e-14));
  CHECK(posterior_upper_bound_halfnormal(2.0, 10.0) ==
        doctest::Approx(kSqrt2OverPi + 2.0).epsilon(1e-14));
  for (double sigma : {0.1, 0.5, 1.0, 2.0, 10.0})
    for (double y = -10.0; y <= 10.0; y += 0.25)
      CHECK(posterior_mean_halfnormal(sigma, y) <=
            posterior_upper_bound_halfnormal(sigma, y) + 1e-12);
}

TEST_CASE("truncated posterior") {
  SUBCASE("degenerate prior") {
    const auto d = RewardDistribution::point_mass(0.5);
    CHECK(truncated_posterior_mean(d, 1.0, 3.0, -7.0).value == 0.5);
    CHECK(truncated_posterior_mean(d, 1.0, 3.0, 40.0).value == 0.5);
  }
  SUBCASE("near-exact observation") {
    const auto u = RewardDistribution::uniform(0.0, 1.0);
    CHECK(truncated_posterior_mean(u, 1.0, 0.01, 0.7).value == doctest::Approx(0.7).epsilon(1e-3));
  }
  SUBCASE("bounded-posterior guarantee: sigma > 2V, y <= sigma^2/(2V) gives <= 2 E[Z]") {
    const auto exp1 = RewardDistribution::exponential(1.0);
    const double cap = 1.0;
    // E[Z] for Z = D | D <= 1
    const double mass = exp1.cdf(cap);
    const double mean_z =
        (exp1.mean() - (cap * (1.0 - exp1.cdf(cap)) + exp1.tail_integral(cap))) / mass;
    for (double sigma : {2.5, 3.0, 6.0}) {
      const double y_max = sigma * sigma / (2.0 * cap);
      for (double y : {-sigma, 0.0, y_max / 2.0, y_max}) {
        CAPTURE(sigma);
        CAPTURE(y);
        CHECK(truncated_posterior_mean(exp1, cap, sigma, y).value <= 2.0 * mean_z * (1 + 1e-9));
      }
    }
    // the example point: sigma=3, y=0 stays below 2 E[Z]
    CHECK(truncated_posterior_mean(exp1, 1.0, 3.0, 0.0).value <= 2.0 * mean_z);
  }
  SUBCASE("cap larger than the support changes nothing") {
    const auto u = RewardDistribution::uniform(0.0, 1.0);
    CHECK(truncated_posterior_mean(u, 5.0, 1.0, 0.3).value ==
          doctest::Approx(posterior_mean({u, 1.0, 0.3}).value).epsilon(1e-9));
  }
  SUBCASE("invalid caps") {
    const auto u = RewardDistribution::uniform(0.5, 1.0);
    CHECK_THROWS_AS(truncated_posterior_mean(u, 0.25, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(truncated_posterior_mean(u, -1.0, 1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("observations far outside the window fall back gracefully") {
  // uniform support [0,1], observation at y = 5 with sigma = 0.1: the window
  // [y - 10s, y + 10s] misses the support entirely; the engine extends from
  // the nearest support point instead of reporting zero mass.
  const auto u = RewardDistribution::uniform(0.0, 1.0);
  const auto r = posterior_mean({u, 0.1, 5.0});
  CHECK_FALSE(r.degenerate);
  CHECK(r.value == doctest::Approx(1.0 - 0.0025).epsilon(1e-2));
  CHECK(r.value <= 1.0);

  // same situation for the exponential on the left side
  const auto exp1 = RewardDistribution::exponential(1.0);
  const auto r2 = posterior_mean({exp1, 0.1, -5.0});
  CHECK_FALSE(r2.degenerate);
  CHECK(r2.value > 0.0);
  CHECK(r2.value < 0.01);
}
