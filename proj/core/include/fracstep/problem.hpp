#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fracstep/order_schedule.hpp"
#include "fracstep/singular_quadrature.hpp"
#include "fracstep/spectral_operator.hpp"

namespace fracstep {

/// Source f(x, t), either zero, a sum of separable products, or a general callable.
class SourceTerm {
 public:
  /// shape(x) * profile(t); `profile_derivative` may be empty.
  struct SeparablePart {
    std::function<double(double)> shape;
    std::function<double(double)> profile;
    std::function<double(double)> profile_derivative;
  };

  SourceTerm() = default;

  static SourceTerm zero() { return {}; }
  static SourceTerm separable(std::vector<SeparablePart> parts);
  /// General source; `f_t` (time derivative) may be empty.
  static SourceTerm general(std::function<double(double, double)> f,
                            std::function<double(double, double)> f_t = {});

  [[nodiscard]] bool is_zero() const noexcept { return parts_.empty() && !general_; }
  [[nodiscard]] bool is_separable() const noexcept { return !general_; }
  [[nodiscard]] bool has_time_derivative() const noexcept;
  [[nodiscard]] std::span<const SeparablePart> parts() const noexcept { return parts_; }

  [[nodiscard]] double operator()(double x, double t) const;
  /// d f / d t from the registered derivative.
  [[nodiscard]] double time_derivative(double x, double t) const;

  /// Source multiplied by a constant.
  [[nodiscard]] SourceTerm scaled(double factor) const;

  friend class ProjectedSource;

 private:
  std::vector<SeparablePart> parts_;
  std::function<double(double, double)> general_;
  std::function<double(double, double)> general_t_;
};

/// Modal coefficients f_{0,n}(t) = <f(., t), X_n> and their time derivatives.
class ProjectedSource {
 public:
  ProjectedSource(const SourceTerm& source, const EigenSystem& system, double horizon);

  [[nodiscard]] bool is_zero() const noexcept { return zero_; }
  [[nodiscard]] std::size_t modes() const noexcept { return modes_; }

  /// f_{0,n}(t) for every mode.
  void values(double t, std::span<double> out) const;
  /// d/dt f_{0,n}(t) for every mode; finite differences when no derivative is registered.
  void derivatives(double t, std::span<double> out) const;

 private:
  const SourceTerm* source_;
  const EigenSystem* system_;
  double horizon_;
  std::size_t modes_;
  bool zero_;
  std::vector<std::vector<double>> part_coeffs_;  // per separable part, per mode
  bool profile_derivatives_ = true;
};

/// Composite rule and mesh settings shared by the solver and the verification checks.
struct QuadratureOptions {
  std::size_t cells = 192;        ///< graded cells per segment for the source interpolant
  double grading = 3.0;           ///< mesh exponent r >= 1
  std::size_t jacobi_nodes = 32;  ///< Gauss-Jacobi nodes at singular segment starts
  HistoryRuleOptions history;
};

enum class OperatorBackend { analytic, finite_difference };

/// Complete description of one initial-boundary value problem.
struct ProblemSpec {
  OperatorSpec op = OperatorSpec::constant_coefficients(1.0, 1.0, 0.0);
  OrderSchedule schedule = OrderSchedule::constant(0.5, 1.0);
  std::function<double(double)> initial = [](double) { return 0.0; };
  SourceTerm source;
  std::vector<double> epsilons;  ///< empty selects (1 - beta_j) / 2
  std::size_t modes = 16;
  std::size_t spatial_points = 1024;  ///< grid intervals for projections / FD interior points + 1
  OperatorBackend backend = OperatorBackend::analytic;
  QuadratureOptions quad;

  /// Regularity exponents eps_j, checked against (0, 1 - beta_j).
  [[nodiscard]] std::vector<double> regularity_exponents() const;
  /// Throws on inconsistent settings.
  void validate() const;
  [[nodiscard]] EigenSystem build_eigensystem() const;

  /// Same problem with u_0 and f multiplied by `factor`.
  [[nodiscard]] ProblemSpec scaled(double factor) const;
};

/// sqrt(2/L) sin(n pi x / L) for n >= 1.
[[nodiscard]] double sine_mode(std::size_t n, double length, double x);

}  // namespace fracstep
