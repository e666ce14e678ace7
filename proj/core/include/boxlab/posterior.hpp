#pragma once

#include "boxlab/distribution.hpp"

namespace boxlab {

struct PosteriorQuery {
  RewardDistribution dist;
  double sigma;            // noise scale, >= 0
  double y;                // observation
  double rel_tol = 1e-8;   // relative quadrature tolerance
};

struct PosteriorResult {
  double value = 0.0;
  // True when the likelihood underflowed everywhere and the value fell back
  // to the support point nearest the observation.
  bool degenerate = false;
};

// E[X | X + N(0, sigma^2) = y] for X ~ dist.  Gaussian weights are shifted by
// the exponent at the support point nearest y, so far-off observations stay
// in range; discrete kinds use exact weighted atom sums.
PosteriorResult posterior_mean(const PosteriorQuery& query);

// Same posterior for X conditioned on X <= cap (a bounded reward).
PosteriorResult truncated_posterior_mean(const RewardDistribution& dist, double cap, double sigma,
                                         double y);

// Closed form for the unit half-normal prior:
//   y/(s^2+1) + mills(-y / (s sqrt(s^2+1))) * s/sqrt(s^2+1).
double posterior_mean_halfnormal(double sigma, double y);

// Scale-covariant wrapper: X ~ |N(0, scale^2)|.
double halfnormal_posterior(double scale, double sigma, double y);

// U_sigma(y) = sqrt(2/pi) + max{0, y/(sigma^2+1)}; dominates the closed form.
double posterior_upper_bound_halfnormal(double sigma, double y);

}  // namespace boxlab
