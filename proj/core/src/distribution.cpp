#include "boxlab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "boxlab/errors.hpp"
#include "boxlab/normal.hpp"
#include "boxlab/quadrature.hpp"

namespace boxlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

RewardDistribution RewardDistribution::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential: rate must be > 0");
  return {DistKind::exponential, rate, 0.0};
}

RewardDistribution RewardDistribution::half_normal(double scale) {
  require(std::isfinite(scale) && scale > 0.0, "half_normal: scale must be > 0");
  return {DistKind::half_normal, scale, 0.0};
}

RewardDistribution RewardDistribution::two_point(double value, double prob) {
  require(std::isfinite(value) && value > 0.0, "two_point: value must be > 0");
  require(prob > 0.0 && prob <= 1.0, "two_point: prob must be in (0,1]");
  return {DistKind::two_point, value, prob};
}

RewardDistribution RewardDistribution::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo < hi,
          "uniform: need 0 <= lo < hi");
  return {DistKind::uniform, lo, hi};
}

RewardDistribution RewardDistribution::point_mass(double value) {
  require(std::isfinite(value) && value >= 0.0, "point_mass: value must be >= 0");
  return {DistKind::point_mass, value, 0.0};
}

double RewardDistribution::cdf(double x) const {
  switch (kind_) {
    case DistKind::exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-p0_ * x);
    case DistKind::half_normal:
      return x <= 0.0 ? 0.0 : std::erf(x / (p0_ * std::numbers::sqrt2));
    case DistKind::two_point:
      if (x < 0.0) return 0.0;
      return x < p0_ ? 1.0 - p1_ : 1.0;
    case DistKind::uniform:
      if (x <= p0_) return 0.0;
      if (x >= p1_) return 1.0;
      return (x - p0_) / (p1_ - p0_);
    case DistKind::point_mass:
      return x < p0_ ? 0.0 : 1.0;
  }
  return 0.0;
}

double RewardDistribution::density(double x) const {
  switch (kind_) {
    case DistKind::exponential:
      return x < 0.0 ? 0.0 : p0_ * std::exp(-p0_ * x);
    case DistKind::half_normal: {
      if (x < 0.0) return 0.0;
      const double z = x / p0_;
      return kSqrt2OverPi / p0_ * std::exp(-0.5 * z * z);
    }
    case DistKind::uniform:
      return (x >= p0_ && x <= p1_) ? 1.0 / (p1_ - p0_) : 0.0;
    case DistKind::two_point:
    case DistKind::point_mass:
      throw std::invalid_argument("density: " + describe() + " has atoms, no density");
  }
  return 0.0;
}

std::vector<Atom> RewardDistribution::atoms() const {
  switch (kind_) {
    case DistKind::two_point:
      if (p1_ >= 1.0) return {{p0_, 1.0}};
      return {{0.0, 1.0 - p1_}, {p0_, p1_}};
    case DistKind::point_mass:
      return {{p0_, 1.0}};
    default:
      return {};
  }
}

double RewardDistribution::quantile(double p) const {
  require(p > 0.0 && p < 1.0, "quantile: p must be in (0,1)");
  switch (kind_) {
    case DistKind::exponential:
      return -std::log1p(-p) / p0_;
    case DistKind::half_normal:
      return p0_ * normal_quantile(0.5 * (1.0 + p));
    case DistKind::two_point:
      return p <= 1.0 - p1_ ? 0.0 : p0_;
    case DistKind::uniform:
      return p0_ + p * (p1_ - p0_);
    case DistKind::point_mass:
      return p0_;
  }
  return 0.0;
}

double RewardDistribution::mean() const {
  switch (kind_) {
    case DistKind::exponential:
      return 1.0 / p0_;
    case DistKind::half_normal:
      return p0_ * kSqrt2OverPi;
    case DistKind::two_point:
      return p0_ * p1_;
    case DistKind::uniform:
      return 0.5 * (p0_ + p1_);
    case DistKind::point_mass:
      return p0_;
  }
  return 0.0;
}

double RewardDistribution::support_lo() const {
  switch (kind_) {
    case DistKind::uniform:
      return p0_;
    case DistKind::point_mass:
      return p0_;
    case DistKind::two_point:
      return p1_ >= 1.0 ? p0_ : 0.0;
    default:
      return 0.0;
  }
}

double RewardDistribution::support_hi() const {
  switch (kind_) {
    case DistKind::exponential:
    case DistKind::half_normal:
      return kInf;
    case DistKind::two_point:
      return p0_;
    case DistKind::uniform:
      return p1_;
    case DistKind::point_mass:
      return p0_;
  }
  return kInf;
}

double RewardDistribution::tail_integral(double x) const {
  if (x < support_lo()) return mean() - x;  // E[(D-x)^+] = E[D] - x below the support
  switch (kind_) {
    case DistKind::exponential:
      return std::exp(-p0_ * x) / p0_;
    case DistKind::half_normal: {
      const double z = x / p0_;
      return p0_ * (kSqrt2OverPi * std::exp(-0.5 * z * z) - z * std::erfc(z / std::numbers::sqrt2));
    }
    case DistKind::two_point:
      return x >= p0_ ? 0.0 : p1_ * (p0_ - x);
    case DistKind::uniform: {
      if (x >= p1_) return 0.0;
      const double d = p1_ - x;
      return 0.5 * d * d / (p1_ - p0_);
    }
    case DistKind::point_mass:
      return x >= p0_ ? 0.0 : p0_ - x;
  }
  return 0.0;
}

double RewardDistribution::sample(SplitMix64& rng) const {
  switch (kind_) {
    case DistKind::exponential:
      return -std::log1p(-rng.uniform()) / p0_;
    case DistKind::half_normal: {
      std::normal_distribution<double> norm;
      return std::abs(norm(rng)) * p0_;
    }
    case DistKind::two_point:
      return rng.uniform() < p1_ ? p0_ : 0.0;
    case DistKind::uniform:
      return p0_ + rng.uniform() * (p1_ - p0_);
    case DistKind::point_mass:
      return p0_;
  }
  return 0.0;
}

std::string RewardDistribution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DistKind::exponential:
      os << "exponential(rate=" << p0_ << ")";
      break;
    case DistKind::half_normal:
      os << "half_normal(scale=" << p0_ << ")";
      break;
    case DistKind::two_point:
      os << "two_point(value=" << p0_ << ", prob=" << p1_ << ")";
      break;
    case DistKind::uniform:
      os << "uniform(" << p0_ << ", " << p1_ << ")";
      break;
    case DistKind::point_mass:
      os << "point_mass(" << p0_ << ")";
      break;
  }
  return os.str();
}

MaxLaw::MaxLaw(RewardDistribution base, std::size_t count) : base_(std::move(base)), count_(count) {
  if (count_ < 1) throw std::invalid_argument("MaxLaw: count must be >= 1");
}

double MaxLaw::cdf(double x) const {
  const double f = base_.cdf(x);
  if (f <= 0.0) return 0.0;
  return std::exp(static_cast<double>(count_) * std::log(f));
}

double MaxLaw::quantile(double p) const {
  // F^count(x) >= p  <=>  F(x) >= p^(1/count)
  const double q = std::exp(std::log(p) / static_cast<double>(count_));
  if (q >= 1.0) return base_.quantile(1.0 - 1e-16);
  return base_.quantile(q);
}

double MaxLaw::sample(SplitMix64& rng) const {
  double u = rng.uniform();
  if (u <= 0.0) u = 0x1.0p-53;
  const double q = std::exp(std::log(u) / static_cast<double>(count_));
  // Atomic bases: inverse CDF at q is exact; continuous bases likewise.
  if (q >= 1.0) return base_.quantile(1.0 - 1e-16);
  return base_.quantile(q);
}

double MaxLaw::tail_integral(double x) const {
  // \int_x^inf (1 - F^m).  Truncate where m*(1-F) is negligible and add the
  // union bound m * tail of the base law for the remainder.
  const double m = static_cast<double>(count_);
  if (x >= support_hi()) return 0.0;
  double hi = support_hi();
  if (!std::isfinite(hi)) {
    const double p = 1.0 - 1e-14 / m;
    hi = std::max(x + 1e-12, base_.quantile(std::min(p, 1.0 - 1e-16)));
  }
  if (hi <= x) return m * base_.tail_integral(x);
  auto integrand = [&](double t) {
    const double f = base_.cdf(t);
    if (f <= 0.0) return 1.0;
    return -std::expm1(m * std::log(f));
  };
  auto r = integrate(integrand, x, hi, 1e-13 * (1.0 + std::abs(hi - x)), 1e-10);
  if (!r.converged) throw NumericalError("MaxLaw::tail_integral: quadrature did not converge");
  return r.value + m * base_.tail_integral(hi);
}

double MaxLaw::mean() const {
  // Support lies in [0, inf), so E[max] = \int_0^inf (1 - F^m).
  return tail_integral(0.0);
}

NoiseProfile::NoiseProfile(std::vector<double> sigma) : sigma_(std::move(sigma)) {
  if (sigma_.empty()) throw std::invalid_argument("NoiseProfile: need at least one box");
  for (double s : sigma_) {
    if (!std::isfinite(s) || s < 0.0)
      throw std::invalid_argument("NoiseProfile: sigma entries must be finite and >= 0");
  }
  order_.resize(sigma_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return sigma_[a] < sigma_[b]; });
  std::vector<double> sorted(sigma_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) sorted[i] = sigma_[order_[i]];
  sigma_ = std::move(sorted);
}

std::size_t NoiseProfile::exact_count() const {
  return static_cast<std::size_t>(
      std::distance(sigma_.begin(), std::upper_bound(sigma_.begin(), sigma_.end(), 0.0)));
}

}  // namespace boxlab
