#include "idsbed/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace idsbed {

namespace {

using std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286061;

constexpr std::array<std::string_view, 2> kLocScale{"loc", "scale"};
constexpr std::array<std::string_view, 2> kGaussianNames{"mu", "sigma"};
constexpr std::array<std::string_view, 2> kVonMisesNames{"mu", "kappa"};
constexpr std::array<std::string_view, 2> kShapeScale{"shape", "scale"};
constexpr std::array<std::string_view, 1> kScaleOnly{"scale"};
constexpr std::array<std::string_view, 2> kUniformNames{"low", "high"};
constexpr std::array<std::string_view, 2> kWaldNames{"mean", "scale"};

[[noreturn]] void invalid(const DistributionSpec& spec, const std::string& why) {
  throw Error(ErrorKind::InvalidParams, std::string(to_string(spec.kind)) + ": " + why);
}

// Bisection on a monotone function; `lo`/`hi` must bracket the root.
template <typename F>
double bisect(F&& f, double lo, double hi, double target) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

// log of Phi(-b) for b >= 0, accurate far into the tail.
double log_normal_upper_tail(double b) {
  if (b < 25.0) return std::log(0.5 * std::erfc(b / std::numbers::sqrt2));
  const double b2 = b * b;
  return -0.5 * b2 - std::log(b * std::sqrt(2.0 * pi)) +
         std::log1p(-1.0 / b2 + 3.0 / (b2 * b2));
}

double wald_cdf(double mu, double lambda, double x) {
  if (x <= 0.0) return 0.0;
  const double root = std::sqrt(lambda / x);
  const double first = detail::standard_normal_cdf(root * (x / mu - 1.0));
  const double b = root * (x / mu + 1.0);
  const double second = std::exp(2.0 * lambda / mu + log_normal_upper_tail(b));
  return std::min(1.0, first + second);
}

double wald_quantile(double mu, double lambda, double p) {
  double hi = mu;
  while (wald_cdf(mu, lambda, hi) < p) hi *= 2.0;
  return bisect([&](double x) { return wald_cdf(mu, lambda, x); }, 0.0, hi, p);
}

// Von Mises CDF relative to the location, theta in [-pi, pi].
double von_mises_centered_cdf(std::span<const double> ratios, double theta) {
  double sum = 0.0;
  for (std::size_t j = ratios.size(); j-- > 0;) {
    const double n = static_cast<double>(j + 1);
    sum += ratios[j] * std::sin(n * theta) / n;
  }
  return (theta + pi) / (2.0 * pi) + sum / pi;
}

double von_mises_sample(double mu, double kappa, Rng& rng) {
  // Best & Fisher (1979) wrapped-Cauchy envelope.
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  while (true) {
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform_open();
    const double u3 = rng.uniform01();
    const double z = std::cos(pi * u1);
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      double theta = std::acos(std::clamp(f, -1.0, 1.0));
      if (u3 < 0.5) theta = -theta;
      if (theta <= -pi) theta = pi;
      return mu + theta;
    }
  }
}

double wald_sample(double mu, double lambda, Rng& rng) {
  // Michael, Schucany & Haas transformation.
  const double nu = rng.standard_normal();
  const double y = nu * nu;
  const double x = mu + mu * mu * y / (2.0 * lambda) -
                   mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
  if (rng.uniform01() <= mu / (mu + x)) return x;
  return mu * mu / x;
}

}  // namespace

namespace detail {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double standard_normal_quantile(double p) {
  if (p > 0.5) return -standard_normal_quantile(1.0 - p);
  // Acklam's rational approximation, refined with one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  double x = 0.0;
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = standard_normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

std::vector<double> bessel_ratios(double kappa) {
  std::vector<double> ratios;
  const double i0 = std::cyl_bessel_i(0.0, kappa);
  for (int j = 1; j < 4000; ++j) {
    const double r = std::cyl_bessel_i(static_cast<double>(j), kappa) / i0;
    if (!(r > 1e-18) && j > kappa) break;
    ratios.push_back(r);
  }
  return ratios;
}

}  // namespace detail

std::optional<DistributionKind> distribution_of(DataCategory category) {
  if (!is_generator(category)) return std::nullopt;
  return static_cast<DistributionKind>(static_cast<std::uint8_t>(category));
}

std::string_view to_string(DistributionKind kind) { return to_string(category_of(kind)); }

std::span<const std::string_view> parameter_names(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Gaussian: return kGaussianNames;
    case DistributionKind::VonMises: return kVonMisesNames;
    case DistributionKind::Pareto:
    case DistributionKind::Weibull: return kShapeScale;
    case DistributionKind::Rayleigh: return kScaleOnly;
    case DistributionKind::Uniform: return kUniformNames;
    case DistributionKind::Wald: return kWaldNames;
    default: return kLocScale;
  }
}

DistributionSpec DistributionSpec::defaults(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Gaussian: return {kind, {0.0, 1.0}};
    case DistributionKind::Gumbel: return {kind, {0.0, 1.0}};
    case DistributionKind::Laplace: return {kind, {0.0, 1.0}};
    case DistributionKind::Logistic: return {kind, {0.0, 1.0}};
    case DistributionKind::VonMises: return {kind, {0.0, 1.0}};
    case DistributionKind::Pareto: return {kind, {3.0, 1.0}};
    case DistributionKind::Rayleigh: return {kind, {1.0, 0.0}};
    case DistributionKind::Uniform: return {kind, {0.0, 1.0}};
    case DistributionKind::Wald: return {kind, {1.0, 1.0}};
    case DistributionKind::Weibull: return {kind, {1.5, 1.0}};
  }
  return {kind, {0.0, 1.0}};
}

void validate(const DistributionSpec& spec) {
  const auto [p0, p1] = spec.params;
  const auto names = parameter_names(spec.kind);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!std::isfinite(spec.params[i])) invalid(spec, std::string(names[i]) + " must be finite");
  }
  auto positive = [&](std::size_t i) {
    if (!(spec.params[i] > 0.0)) invalid(spec, std::string(names[i]) + " must be > 0");
  };
  switch (spec.kind) {
    case DistributionKind::Gaussian:
    case DistributionKind::Gumbel:
    case DistributionKind::Laplace:
    case DistributionKind::Logistic:
      positive(1);
      break;
    case DistributionKind::VonMises:
      if (!(p1 >= 1e-3 && p1 <= 500.0)) invalid(spec, "kappa must lie in [0.001, 500]");
      break;
    case DistributionKind::Pareto:
    case DistributionKind::Weibull:
    case DistributionKind::Wald:
      positive(0);
      positive(1);
      break;
    case DistributionKind::Rayleigh:
      positive(0);
      break;
    case DistributionKind::Uniform:
      if (!(p0 < p1)) invalid(spec, "low must be < high");
      break;
  }
}

double cdf(const DistributionSpec& spec, double x) {
  const auto [p0, p1] = spec.params;
  switch (spec.kind) {
    case DistributionKind::Gaussian: return detail::standard_normal_cdf((x - p0) / p1);
    case DistributionKind::Gumbel: return std::exp(-std::exp(-(x - p0) / p1));
    case DistributionKind::Laplace: {
      const double z = (x - p0) / p1;
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    case DistributionKind::Logistic: return 1.0 / (1.0 + std::exp(-(x - p0) / p1));
    case DistributionKind::VonMises: {
      const double theta = x - p0;
      if (theta <= -pi) return 0.0;
      if (theta >= pi) return 1.0;
      const auto ratios = detail::bessel_ratios(p1);
      return std::clamp(von_mises_centered_cdf(ratios, theta), 0.0, 1.0);
    }
    case DistributionKind::Pareto: return x < p1 ? 0.0 : 1.0 - std::pow(p1 / x, p0);
    case DistributionKind::Rayleigh:
      return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x * x / (2.0 * p0 * p0));
    case DistributionKind::Uniform:
      return std::clamp((x - p0) / (p1 - p0), 0.0, 1.0);
    case DistributionKind::Wald: return wald_cdf(p0, p1, x);
    case DistributionKind::Weibull:
      return x <= 0.0 ? 0.0 : 1.0 - std::exp(-std::pow(x / p1, p0));
  }
  return 0.0;
}

double quantile(const DistributionSpec& spec, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "quantile level must lie in (0, 1)");
  }
  const auto [p0, p1] = spec.params;
  switch (spec.kind) {
    case DistributionKind::Gaussian: return p0 + p1 * detail::standard_normal_quantile(p);
    case DistributionKind::Gumbel: return p0 - p1 * std::log(-std::log(p));
    case DistributionKind::Laplace:
      return p < 0.5 ? p0 + p1 * std::log(2.0 * p) : p0 - p1 * std::log(2.0 - 2.0 * p);
    case DistributionKind::Logistic: return p0 + p1 * std::log(p / (1.0 - p));
    case DistributionKind::VonMises: {
      const auto ratios = detail::bessel_ratios(p1);
      const double theta = bisect(
          [&](double t) { return von_mises_centered_cdf(ratios, t); }, -pi, pi, p);
      return p0 + theta;
    }
    case DistributionKind::Pareto: return p1 * std::pow(1.0 - p, -1.0 / p0);
    case DistributionKind::Rayleigh: return p0 * std::sqrt(-2.0 * std::log1p(-p));
    case DistributionKind::Uniform: return p0 + (p1 - p0) * p;
    case DistributionKind::Wald: return wald_quantile(p0, p1, p);
    case DistributionKind::Weibull: return p1 * std::pow(-std::log1p(-p), 1.0 / p0);
  }
  return 0.0;
}

std::optional<double> mean(const DistributionSpec& spec) {
  const auto [p0, p1] = spec.params;
  switch (spec.kind) {
    case DistributionKind::Gaussian:
    case DistributionKind::Laplace:
    case DistributionKind::Logistic:
    case DistributionKind::VonMises: return p0;
    case DistributionKind::Gumbel: return p0 + p1 * kEulerGamma;
    case DistributionKind::Pareto:
      if (p0 <= 1.0) return std::nullopt;
      return p0 * p1 / (p0 - 1.0);
    case DistributionKind::Rayleigh: return p0 * std::sqrt(pi / 2.0);
    case DistributionKind::Uniform: return 0.5 * (p0 + p1);
    case DistributionKind::Wald: return p0;
    case DistributionKind::Weibull: return p1 * std::tgamma(1.0 + 1.0 / p0);
  }
  return std::nullopt;
}

double draw(const DistributionSpec& spec, Rng& rng) {
  const auto [p0, p1] = spec.params;
  switch (spec.kind) {
    case DistributionKind::Gaussian: return p0 + p1 * rng.standard_normal();
    case DistributionKind::Gumbel: return p0 - p1 * std::log(-std::log(rng.uniform_open()));
    case DistributionKind::Laplace: {
      const double u = rng.uniform_open() - 0.5;
      return u < 0.0 ? p0 + p1 * std::log(1.0 + 2.0 * u) : p0 - p1 * std::log(1.0 - 2.0 * u);
    }
    case DistributionKind::Logistic: {
      const double u = rng.uniform_open();
      return p0 + p1 * std::log(u / (1.0 - u));
    }
    case DistributionKind::VonMises: return von_mises_sample(p0, p1, rng);
    case DistributionKind::Pareto: return p1 * std::pow(rng.uniform_open(), -1.0 / p0);
    case DistributionKind::Rayleigh:
      return p0 * std::sqrt(-2.0 * std::log(rng.uniform_open()));
    case DistributionKind::Uniform: return p0 + (p1 - p0) * rng.uniform01();
    case DistributionKind::Wald: return wald_sample(p0, p1, rng);
    case DistributionKind::Weibull:
      return p1 * std::pow(-std::log(rng.uniform_open()), 1.0 / p0);
  }
  return 0.0;
}

IntervalProfile interval_profile(const DistributionSpec& spec) {
  validate(spec);
  const auto m = mean(spec);
  if (!m) {
    throw Error(ErrorKind::UndefinedMean,
                std::string(to_string(spec.kind)) + " has no finite mean for these parameters");
  }
  IntervalProfile profile;
  profile.mean = *m;
  if (spec.kind == DistributionKind::Gaussian) {
    // Evaluate one tail and mirror it so the spans are exactly equal.
    const double z = detail::standard_normal_quantile(kProfileTail);
    profile.r_min = spec.params[0] + spec.params[1] * z;
    profile.r_max = spec.params[0] - spec.params[1] * z;
  } else {
    profile.r_min = quantile(spec, kProfileTail);
    profile.r_max = quantile(spec, 1.0 - kProfileTail);
  }
  profile.s_left = profile.mean - profile.r_min;
  profile.s_right = profile.r_max - profile.mean;
  if (!(profile.s_left > 0.0 && profile.s_right > 0.0)) {
    throw Error(ErrorKind::InvalidParams,
                std::string(to_string(spec.kind)) +
                    ": mean lies outside the central 99.8% interval");
  }
  return profile;
}

Sampler::Sampler(DistributionSpec spec, std::uint64_t seed) : spec_(spec), rng_(seed) {
  validate(spec_);
}

}  // namespace idsbed
