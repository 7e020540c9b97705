#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fracstep/order_schedule.hpp"
#include "fracstep/problem.hpp"
#include "fracstep/singular_quadrature.hpp"
#include "fracstep/spectral_operator.hpp"

namespace fracstep {

/// Effective source f_{j,n} of one mode on one segment, sampled on the segment's mesh.
struct SegmentSource {
  std::size_t mode = 0;
  std::size_t segment = 0;
  GradedMesh mesh;
  std::vector<double> base_samples;        ///< f_{0,n} at the mesh nodes
  std::vector<double> history_correction;  ///< memory terms of earlier segments at the mesh nodes
  std::vector<double> derivative_samples;  ///< f'_{j,n} at mesh nodes 1..n (node 0 may be singular)

  /// f_{j,n} = base - correction at every node.
  [[nodiscard]] std::vector<double> samples() const;
};

/// Memory data of a finished segment: v'_{j,n} sampled on a shared composite rule.
struct DerivativeHistory {
  std::shared_ptr<const HistoryRule> rule;
  std::vector<double> values;

  /// int_{t_j}^{t_{j+1}} (t-s)^{-mu} v'(s) ds for t >= t_{j+1}.
  [[nodiscard]] double integrate(double t, double mu) const { return rule->integrate(values, t, mu); }
};

/// Closed-form representation of v_{j,n} on [t_j, t_{j+1}]:
///   v(t) = u E_{b,1}(-lambda (t-t_j)^b) + int_{t_j}^t K(t-s) f_{j,n}(s) ds,
/// with f_{j,n} replaced by its piecewise-linear interpolant.
class SegmentModeSolution {
 public:
  SegmentModeSolution(SegmentSource source, double lambda, double order, double initial_value);

  [[nodiscard]] std::size_t mode() const noexcept { return source_.mode; }
  [[nodiscard]] std::size_t segment() const noexcept { return source_.segment; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] double order() const noexcept { return order_; }
  [[nodiscard]] double start() const noexcept { return source_.mesh.a(); }
  [[nodiscard]] double end() const noexcept { return source_.mesh.b(); }
  [[nodiscard]] double initial_value() const noexcept { return initial_; }
  [[nodiscard]] double end_value() const noexcept { return end_value_; }
  [[nodiscard]] const SegmentSource& source() const noexcept { return source_; }
  /// True when the mode vanishes identically on this segment.
  [[nodiscard]] bool is_zero() const noexcept { return zero_; }
  /// True when the source interpolant is identically zero.
  [[nodiscard]] bool source_free() const noexcept { return source_free_; }

  /// v_{j,n}(t) for t in [t_j, t_{j+1}]; returns the initial value exactly at t_j.
  [[nodiscard]] double eval(double t) const;
  /// v'_{j,n}(t) for t in (t_j, t_{j+1}].
  [[nodiscard]] double derivative(double t) const;
  /// Coefficient of (t-t_j)^{b-1} E_{b,b}(-lambda (t-t_j)^b) in the derivative.
  [[nodiscard]] double singular_coefficient() const noexcept { return singular_coeff_; }

  [[nodiscard]] const DerivativeHistory& history() const noexcept { return history_; }
  void set_history(DerivativeHistory history) { history_ = std::move(history); }

 private:
  void check_time(double t, bool open_left) const;

  SegmentSource source_;
  std::vector<double> samples_;
  double lambda_;
  double order_;
  double initial_;
  double singular_coeff_;
  double end_value_;
  bool zero_;
  bool source_free_;
  DerivativeHistory history_;
};

/// Solver settings beyond the problem itself.
struct SolverOptions {
  unsigned threads = 1;
  /// Also sample v' of the last segment (needed only by some verification checks).
  bool keep_last_history = false;
};

/// Assembled solution u(x, t) = sum_n v_{j(t),n}(t) X_n(x).
class SolutionField {
 public:
  [[nodiscard]] const EigenSystem& eigensystem() const noexcept { return ctx_->system; }
  [[nodiscard]] const OrderSchedule& schedule() const noexcept { return ctx_->schedule; }
  [[nodiscard]] const ProjectedSource& projected_source() const noexcept { return ctx_->projected; }
  [[nodiscard]] const ProblemSpec& problem() const noexcept { return ctx_->spec; }
  [[nodiscard]] std::size_t modes() const noexcept { return table_.size(); }
  [[nodiscard]] std::span<const double> initial_coefficients() const noexcept { return u0_; }

  [[nodiscard]] const SegmentModeSolution& segment(std::size_t mode, std::size_t j) const {
    return table_.at(mode).at(j);
  }

  /// v_{j,n}(t) with j the segment containing t (the last one at t = T).
  [[nodiscard]] double mode_value(std::size_t mode, double t) const;
  /// Derivative of mode n at t; t must not be a breakpoint.
  [[nodiscard]] double mode_derivative(std::size_t mode, double t) const;
  [[nodiscard]] std::vector<double> mode_trajectory(std::size_t mode, std::span<const double> times) const;

  /// All mode coefficients at time t.
  [[nodiscard]] std::vector<double> coefficients(double t) const;
  [[nodiscard]] std::vector<double> derivative_coefficients(double t) const;

  /// u(x, t) for x in [0, L], t in [0, T].
  [[nodiscard]] double evaluate(double x, double t) const;

  /// Segment source f_{j,n}(t) at an arbitrary t in [t_j, t_{j+1}], memory terms recomputed.
  [[nodiscard]] double segment_source(std::size_t mode, std::size_t j, double t) const;
  /// f'_{j,n}(t) for t in (t_j, t_{j+1}].
  [[nodiscard]] double segment_source_derivative(std::size_t mode, std::size_t j, double t) const;

  /// max over n, j >= 1 of |v_{j-1,n}(t_j) - v_{j,n}(t_j)|.
  [[nodiscard]] double junction_gap(std::size_t j) const;
  /// lambda_N^2 |u_{0,N}|^2, large when the initial data is under-resolved.
  [[nodiscard]] double tail_indicator() const;

  friend SolutionField solve(const ProblemSpec& spec, const SolverOptions& options);

 private:
  struct Context {
    ProblemSpec spec;
    OrderSchedule schedule;
    EigenSystem system;
    ProjectedSource projected;
    Context(ProblemSpec s, EigenSystem sys)
        : spec(std::move(s)), schedule(spec.schedule), system(std::move(sys)),
          projected(spec.source, system, schedule.horizon()) {}
  };

  std::shared_ptr<const Context> ctx_;
  std::vector<double> u0_;
  std::vector<std::vector<SegmentModeSolution>> table_;
};

/// Runs the per-mode segment recursion.
[[nodiscard]] SolutionField solve(const ProblemSpec& spec, const SolverOptions& options = {});

/// Builds f_{j,n} on segment j's mesh from the finished segments k < j.
[[nodiscard]] SegmentSource assemble_segment_source(std::size_t mode, std::size_t j, const OrderSchedule& schedule,
                                                    std::span<const SegmentModeSolution> prior,
                                                    GradedMesh mesh, std::vector<double> base_samples);

}  // namespace fracstep
