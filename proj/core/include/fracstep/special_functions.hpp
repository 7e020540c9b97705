#pragma once

namespace fracstep {

/// Gamma function for x > 0.
[[nodiscard]] double gamma_fn(double x);

/// Reciprocal gamma 1/Gamma(x) for any finite real x; zero at the poles.
[[nodiscard]] double rgamma(double x);

/// Beta function B(r1, r2) = Gamma(r1) Gamma(r2) / Gamma(r1 + r2) for r1, r2 > 0.
[[nodiscard]] double beta_fn(double r1, double r2);

/// sin(pi x) with exact zeros at the integers.
[[nodiscard]] double sin_pi(double x);

/// Parameters of the two-parameter Mittag-Leffler function E_{alpha,beta}.
struct MLParams {
  double alpha;  ///< in (0, 2)
  double beta;   ///< > 0
};

/// Evaluation path chosen by `ml_detailed`.
enum class MLRegime { zero, exponential, series, kummer, asymptotic, integral };

struct MLEvaluation {
  double value;
  MLRegime regime;
  int recurrence_depth;  ///< number of beta -> beta - alpha reductions applied
};

/// E_{alpha,beta}(z) for real z <= 0 with absolute error below 1e-10.
///
/// Picks the power series when its largest term stays small, the algebraic
/// asymptotic expansion when it converges to double precision, and otherwise
/// an integral representation on the positive real axis. Throws DomainError
/// for invalid parameters and AccuracyError when no path meets the target.
[[nodiscard]] double ml(MLParams params, double z);

/// Same as `ml`, reporting which path produced the value.
[[nodiscard]] MLEvaluation ml_detailed(MLParams params, double z);

/// E_{alpha,1}(-lambda t^alpha); equals 1 at t = 0.
[[nodiscard]] double relaxation(double alpha, double lambda, double t);

/// s^{alpha-1} E_{alpha,alpha}(-lambda s^alpha) for s > 0.
[[nodiscard]] double duhamel_kernel(double alpha, double lambda, double s);

/// First primitive of the Duhamel kernel: u^alpha E_{alpha,alpha+1}(-lambda u^alpha).
[[nodiscard]] double kernel_primitive(double alpha, double lambda, double u);

/// Second primitive of the Duhamel kernel: u^{alpha+1} E_{alpha,alpha+2}(-lambda u^alpha).
[[nodiscard]] double kernel_second_primitive(double alpha, double lambda, double u);

[[nodiscard]] const char* to_string(MLRegime regime) noexcept;

}  // namespace fracstep
