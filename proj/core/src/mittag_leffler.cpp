#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "fracstep/errors.hpp"
#include "fracstep/special_functions.hpp"

namespace fracstep {

namespace {

// Regime boundaries, calibrated with tools/calibrate_ml.py.
constexpr double kSeriesMaxTerm = 1e3;       // reject the series once a term exceeds this
constexpr int kSeriesMaxTerms = 4000;
constexpr double kAsymptoticTolerance = 1e-16;
constexpr int kAsymptoticMaxTerms = 80;
constexpr double kUnitAlphaAsymptoticFrom = 40.0;
constexpr double kIntegralExpCutoff = 42.0;  // exp(-42) ~ 6e-19
constexpr double kIntegralRelTolerance = 1e-11;
constexpr double kIntegralFailTolerance = 5e-11;
constexpr unsigned kIntegralMaxDepth = 10;

// Compensated (Neumaier) accumulator.
struct Accumulator {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  [[nodiscard]] double value() const { return sum + carry; }
};

std::optional<double> power_series(double a, double b, double x) {
  const double log_x = std::log(x);
  const double log_limit = std::log(kSeriesMaxTerm);
  Accumulator acc;
  double prev_log = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kSeriesMaxTerms; ++k) {
    const double arg = a * k + b;
    const double log_mag = k * log_x - std::lgamma(arg);
    if (log_mag > log_limit) return std::nullopt;
    double mag;
    if (k * log_x < 700.0 && arg < 171.0) {
      mag = std::pow(x, k) / std::tgamma(arg);
    } else {
      mag = std::exp(log_mag);
    }
    acc.add((k % 2 == 0) ? mag : -mag);
    const bool decreasing = log_mag < prev_log;
    prev_log = log_mag;
    if (decreasing && mag <= 1e-17 * std::max(std::abs(acc.value()), 1e-3)) return acc.value();
  }
  return std::nullopt;
}

// Residue contribution of the two poles for 1 < alpha < 2.
double pole_term(double a, double b, double x) {
  const std::complex<double> zeta = std::polar(std::pow(x, 1.0 / a), std::numbers::pi / a);
  return (2.0 / a) * std::real(std::pow(zeta, 1.0 - b) * std::exp(zeta));
}

std::optional<double> asymptotic_series(double a, double b, double x) {
  const double log_x = std::log(x);
  Accumulator acc;
  double prev_envelope = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kAsymptoticMaxTerms; ++k) {
    const double shifted = 1.0 - b + a * k;
    const double envelope = shifted > 0.5
                                ? std::exp(-k * log_x + std::lgamma(shifted)) / std::numbers::pi
                                : std::exp(-k * log_x) * std::abs(rgamma(b - a * k));
    if (envelope < kAsymptoticTolerance) return acc.value();
    if (envelope > prev_envelope && k > 2) return std::nullopt;
    prev_envelope = envelope;
    const double term = std::exp(-k * log_x) * rgamma(b - a * k);
    acc.add((k % 2 == 1) ? term : -term);
  }
  return std::nullopt;
}

// E_{a,b}(-x) as an integral along the positive real axis, used for b <= 1.
double integral_representation(double a, double b, double x) {
  const double p = (1.0 - b) / a;
  const double s1 = sin_pi(1.0 - b);
  const double s2 = sin_pi(1.0 - b + a);
  const double c = std::cos(std::numbers::pi * a);
  const double pref = 1.0 / (a * std::numbers::pi);
  const double inv_a = 1.0 / a;

  auto regular = [&](double chi) {
    const double den = chi * chi + 2.0 * chi * x * c + x * x;
    return pref * std::exp(-std::pow(chi, inv_a)) * (chi * s1 + x * s2) / den;
  };

  const double chi_max = std::pow(kIntegralExpCutoff, a);
  const double c0 = std::min(0.5 * std::min(x, 1.0), chi_max);

  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  double total = 0.0;
  double total_error = 0.0;

  auto body = [&](double chi) { return std::pow(chi, p) * regular(chi); };
  {
    double err = 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> head_rule;
    total += head_rule.integrate(body, 0.0, c0, kIntegralRelTolerance, &err);
    total_error += err;
  }

  std::vector<double> cuts;
  for (double v = 4.0 * c0; v < chi_max; v *= 4.0) cuts.push_back(v);
  for (double f : {0.5, 1.0, 2.0}) {
    const double v = f * x * std::abs(c);
    if (v > c0 && v < chi_max) cuts.push_back(v);
  }
  cuts.push_back(chi_max);
  std::sort(cuts.begin(), cuts.end());

  double lo = c0;
  for (double hi : cuts) {
    if (hi <= lo) continue;
    double err = 0.0;
    total += GK::integrate(body, lo, hi, kIntegralMaxDepth, kIntegralRelTolerance, &err);
    total_error += err;
    lo = hi;
  }
  if (!(total_error <= kIntegralFailTolerance) || !std::isfinite(total)) {
    std::ostringstream msg;
    msg << "Mittag-Leffler integral representation missed its tolerance at (alpha=" << a << ", beta=" << b
        << ", z=" << -x << "), error estimate " << total_error;
    throw AccuracyError(msg.str());
  }
  return total;
}

double kummer_series(double b, double x) {
  // E_{1,b}(-x) = exp(-x)/Gamma(b) * sum_k (b-1)/(b-1+k) x^k/k!, all terms positive for b > 1.
  Accumulator acc;
  double power = 1.0;
  for (int k = 0; k < 4 * kSeriesMaxTerms; ++k) {
    if (k > 0) power *= x / k;
    const double term = power * (b - 1.0) / (b - 1.0 + k);
    acc.add(term);
    if (k > x && term <= 1e-17 * acc.value()) break;
  }
  return std::exp(-x) * acc.value() * rgamma(b);
}

MLEvaluation unit_alpha(double b, double x) {
  if (b == 1.0) return {std::exp(-x), MLRegime::exponential, 0};
  if (x <= 1.0) {
    if (auto s = power_series(1.0, b, x)) return {*s, MLRegime::series, 0};
  }
  if (x > kUnitAlphaAsymptoticFrom) {
    if (auto s = asymptotic_series(1.0, b, x)) return {*s, MLRegime::asymptotic, 0};
  }
  if (b > 1.0) return {kummer_series(b, x), MLRegime::kummer, 0};
  // E_{1,b}(z) = 1/Gamma(b) + z E_{1,b+1}(z).
  const MLEvaluation up = unit_alpha(b + 1.0, x);
  return {rgamma(b) - x * up.value, up.regime, up.recurrence_depth + 1};
}

MLEvaluation evaluate(double a, double b, double x) {
  if (a == 1.0) return unit_alpha(b, x);
  if (auto s = power_series(a, b, x)) return {*s, MLRegime::series, 0};
  const double residue = a > 1.0 ? pole_term(a, b, x) : 0.0;
  if (auto s = asymptotic_series(a, b, x)) return {*s + residue, MLRegime::asymptotic, 0};
  if (b > 1.0) {
    // From E_{a,b-a}(z) = 1/Gamma(b-a) + z E_{a,b}(z).
    const MLEvaluation down = evaluate(a, b - a, x);
    return {(rgamma(b - a) - down.value) / x, down.regime, down.recurrence_depth + 1};
  }
  return {integral_representation(a, b, x) + residue, MLRegime::integral, 0};
}

}  // namespace

MLEvaluation ml_detailed(MLParams params, double z) {
  const double a = params.alpha;
  const double b = params.beta;
  if (!(a > 0.0 && a < 2.0) || !(b > 0.0) || !std::isfinite(b)) {
    std::ostringstream msg;
    msg << "Mittag-Leffler parameters need alpha in (0,2) and beta > 0, got (" << a << ", " << b << ")";
    throw DomainError(msg.str());
  }
  if (!(z <= 0.0) || !std::isfinite(z)) {
    std::ostringstream msg;
    msg << "Mittag-Leffler argument must be finite and <= 0, got " << z;
    throw DomainError(msg.str());
  }
  if (z == 0.0) return {rgamma(b), MLRegime::zero, 0};
  return evaluate(a, b, -z);
}

double ml(MLParams params, double z) { return ml_detailed(params, z).value; }

namespace {
void check_rate(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "eigenvalue must be finite and >= 0, got " << lambda;
    throw DomainError(msg.str());
  }
}
}  // namespace

double relaxation(double alpha, double lambda, double t) {
  check_rate(lambda);
  if (!(t >= 0.0)) throw DomainError("relaxation requires elapsed time >= 0");
  if (t == 0.0) return 1.0;
  return ml({alpha, 1.0}, -lambda * std::pow(t, alpha));
}

double duhamel_kernel(double alpha, double lambda, double s) {
  check_rate(lambda);
  if (!(s > 0.0)) throw DomainError("duhamel_kernel requires s > 0; the singularity at 0 belongs to quadrature");
  const double sa = std::pow(s, alpha);
  return sa / s * ml({alpha, alpha}, -lambda * sa);
}

double kernel_primitive(double alpha, double lambda, double u) {
  check_rate(lambda);
  if (!(u >= 0.0)) throw DomainError("kernel_primitive requires u >= 0");
  if (u == 0.0) return 0.0;
  const double ua = std::pow(u, alpha);
  return ua * ml({alpha, alpha + 1.0}, -lambda * ua);
}

double kernel_second_primitive(double alpha, double lambda, double u) {
  check_rate(lambda);
  if (!(u >= 0.0)) throw DomainError("kernel_second_primitive requires u >= 0");
  if (u == 0.0) return 0.0;
  const double ua = std::pow(u, alpha);
  return ua * u * ml({alpha, alpha + 2.0}, -lambda * ua);
}

}  // namespace fracstep
