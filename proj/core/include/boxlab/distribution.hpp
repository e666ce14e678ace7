#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "boxlab/rng.hpp"

namespace boxlab {

enum class DistKind { exponential, half_normal, two_point, uniform, point_mass };

struct Atom {
  double value;
  double prob;
};

// A reward law supported on [0, inf).  The closed set of kinds keeps every
// functional (quantile, mean, tail integral) exact where a closed form
// exists; the generic quadrature paths only ever see the half-normal.
class RewardDistribution {
 public:
  static RewardDistribution exponential(double rate);
  static RewardDistribution half_normal(double scale);
  static RewardDistribution two_point(double value, double prob);
  static RewardDistribution uniform(double lo, double hi);
  static RewardDistribution point_mass(double value);

  DistKind kind() const { return kind_; }
  double param(std::size_t i) const { return i == 0 ? p0_ : p1_; }

  double cdf(double x) const;
  double density(double x) const;  // throws for atomic kinds
  bool has_density() const { return kind_ != DistKind::two_point && kind_ != DistKind::point_mass; }
  std::vector<Atom> atoms() const;  // empty for continuous kinds

  // inf{x : F(x) >= p} for p in (0, 1).
  double quantile(double p) const;
  double mean() const;

  double support_lo() const;
  double support_hi() const;  // +inf for unbounded kinds

  // Integral of the survival function: \int_x^inf (1 - F(t)) dt = E[(D - x)^+].
  double tail_integral(double x) const;

  double sample(SplitMix64& rng) const;

  std::string describe() const;
  bool operator==(const RewardDistribution&) const = default;

 private:
  RewardDistribution(DistKind kind, double p0, double p1) : kind_(kind), p0_(p0), p1_(p1) {}

  DistKind kind_;
  double p0_;
  double p1_;
};

// The law of the maximum of `count` iid draws (CDF F^count).  Exposes the
// same surface the threshold functionals need, so alpha/beta computations
// apply to max laws verbatim.
class MaxLaw {
 public:
  MaxLaw(RewardDistribution base, std::size_t count);

  double cdf(double x) const;
  double quantile(double p) const;
  double mean() const;
  double support_lo() const { return base_.support_lo(); }
  double support_hi() const { return base_.support_hi(); }
  double tail_integral(double x) const;
  double sample(SplitMix64& rng) const;  // inverse-CDF: base quantile at u^(1/count)

  const RewardDistribution& base() const { return base_; }
  std::size_t count() const { return count_; }

 private:
  RewardDistribution base_;
  std::size_t count_;
};

template <class D>
concept DistributionLike = requires(const D& d, double x, double p) {
  { d.cdf(x) } -> std::convertible_to<double>;
  { d.quantile(p) } -> std::convertible_to<double>;
  { d.mean() } -> std::convertible_to<double>;
  { d.tail_integral(x) } -> std::convertible_to<double>;
  { d.support_hi() } -> std::convertible_to<double>;
};

// Per-box noise scales, kept sorted ascending.  The permutation back to the
// caller's order is recorded so experiment traces can name original boxes.
class NoiseProfile {
 public:
  explicit NoiseProfile(std::vector<double> sigma);

  std::size_t size() const { return sigma_.size(); }
  double sigma(std::size_t i) const { return sigma_[i]; }
  std::span<const double> values() const { return sigma_; }
  std::span<const std::size_t> sort_order() const { return order_; }

  std::size_t exact_count() const;  // boxes with sigma == 0

 private:
  std::vector<double> sigma_;
  std::vector<std::size_t> order_;
};

}  // namespace boxlab
