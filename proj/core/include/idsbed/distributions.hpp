#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "idsbed/rng.hpp"
#include "idsbed/types.hpp"

namespace idsbed {

enum class DistributionKind : std::uint8_t {
  Gaussian,
  Gumbel,
  Laplace,
  Logistic,
  VonMises,
  Pareto,
  Rayleigh,
  Uniform,
  Wald,
  Weibull,
};

inline constexpr std::array<DistributionKind, 10> kAllDistributions{
    DistributionKind::Gaussian, DistributionKind::Gumbel,   DistributionKind::Laplace,
    DistributionKind::Logistic, DistributionKind::VonMises, DistributionKind::Pareto,
    DistributionKind::Rayleigh, DistributionKind::Uniform,  DistributionKind::Wald,
    DistributionKind::Weibull};

/// Generator categories share their ordinal with the distribution kinds.
constexpr DataCategory category_of(DistributionKind kind) {
  return static_cast<DataCategory>(static_cast<std::uint8_t>(kind));
}

std::optional<DistributionKind> distribution_of(DataCategory category);
std::string_view to_string(DistributionKind kind);

/// Names of the (up to two) parameters of a kind, in storage order.
///
///   gaussian  mu, sigma        von_mises  mu, kappa       uniform  low, high
///   gumbel    loc, scale       pareto     shape, scale    wald     mean, scale
///   laplace   loc, scale       rayleigh   scale           weibull  shape, scale
///   logistic  loc, scale
///
/// Gumbel is the maximum-type extreme value law; Pareto is the classic
/// (type I) law with support [scale, inf); Wald is the inverse Gaussian.
std::span<const std::string_view> parameter_names(DistributionKind kind);

struct DistributionSpec {
  DistributionKind kind = DistributionKind::Gaussian;
  std::array<double, 2> params{0.0, 1.0};

  /// Unit-scale defaults used when a scenario omits parameters.
  static DistributionSpec defaults(DistributionKind kind);

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

/// Throws Error(InvalidParams) when a parameter is outside the kind's domain.
void validate(const DistributionSpec& spec);

double cdf(const DistributionSpec& spec, double x);

/// Inverse CDF for p in (0, 1). Closed form where one exists; the Wald and
/// von Mises laws are inverted numerically by bisection.
double quantile(const DistributionSpec& spec, double p);

/// Finite mean, or nullopt when the parameterization has none.
std::optional<double> mean(const DistributionSpec& spec);

double draw(const DistributionSpec& spec, Rng& rng);

/// Central 99.8 % interval [q(0.001), q(0.999)], the mean, and the spans from
/// the mean to either interval edge.
struct IntervalProfile {
  double r_min = 0.0;
  double r_max = 0.0;
  double mean = 0.0;
  double s_left = 0.0;
  double s_right = 0.0;
};

inline constexpr double kProfileTail = 0.001;

/// Throws Error(UndefinedMean) for laws without a finite mean and
/// Error(InvalidParams) when the mean falls outside the central interval.
IntervalProfile interval_profile(const DistributionSpec& spec);

/// One owned random stream drawing from one distribution.
class Sampler {
 public:
  Sampler(DistributionSpec spec, std::uint64_t seed);

  double operator()() { return draw(spec_, rng_); }
  const DistributionSpec& spec() const { return spec_; }
  Rng& rng() { return rng_; }

 private:
  DistributionSpec spec_;
  Rng rng_;
};

namespace detail {

double standard_normal_cdf(double x);
double standard_normal_quantile(double p);

/// I_j(kappa) / I_0(kappa) for j = 1.. until the terms vanish.
std::vector<double> bessel_ratios(double kappa);

}  // namespace detail

}  // namespace idsbed
