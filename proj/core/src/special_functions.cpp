#include "fracstep/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracstep/errors.hpp"

namespace fracstep {

namespace {
constexpr double kGammaOverflow = 171.0;
}

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "gamma_fn requires x > 0, got " << x;
    throw DomainError(msg.str());
  }
  return std::tgamma(x);
}

double sin_pi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0.0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == 1.5) return -1.0;
  if (r > 1.0) return -std::sin(std::numbers::pi * (r - 1.0));
  return std::sin(std::numbers::pi * r);
}

double rgamma(double x) {
  if (!std::isfinite(x)) throw DomainError("rgamma requires a finite argument");
  if (x > 0.0) {
    if (x < kGammaOverflow) return 1.0 / std::tgamma(x);
    return std::exp(-std::lgamma(x));
  }
  if (x == std::floor(x)) return 0.0;
  // Reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi.
  const double s = sin_pi(x);
  const double y = 1.0 - x;
  if (y < kGammaOverflow) return std::tgamma(y) * s / std::numbers::pi;
  return std::copysign(std::exp(std::lgamma(y) + std::log(std::abs(s) / std::numbers::pi)), s);
}

double beta_fn(double r1, double r2) {
  if (!(r1 > 0.0) || !(r2 > 0.0) || !std::isfinite(r1) || !std::isfinite(r2)) {
    std::ostringstream msg;
    msg << "beta_fn requires positive arguments, got (" << r1 << ", " << r2 << ")";
    throw DomainError(msg.str());
  }
  const double sum = r1 + r2;
  if (sum < kGammaOverflow) return std::tgamma(r1) * std::tgamma(r2) / std::tgamma(sum);
  return std::exp(std::lgamma(r1) + std::lgamma(r2) - std::lgamma(sum));
}

const char* to_string(MLRegime regime) noexcept {
  switch (regime) {
    case MLRegime::zero: return "zero";
    case MLRegime::exponential: return "exponential";
    case MLRegime::series: return "series";
    case MLRegime::kummer: return "kummer";
    case MLRegime::asymptotic: return "asymptotic";
    case MLRegime::integral: return "integral";
  }
  return "unknown";
}

}  // namespace fracstep
