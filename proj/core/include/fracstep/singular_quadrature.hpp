#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fracstep/gauss_rules.hpp"

namespace fracstep {

enum class SingularEnd { left, right, both };

/// Algebraically graded mesh on [a, b].
///
/// Left grading places nodes at a + (b-a)(i/n)^r; right grading mirrors it;
/// `both` grades each half toward its own endpoint. r = 1 is uniform.
class GradedMesh {
 public:
  GradedMesh(double a, double b, std::size_t n_cells, double grading = 1.0,
             SingularEnd singular_end = SingularEnd::left);

  [[nodiscard]] double a() const noexcept { return nodes_.front(); }
  [[nodiscard]] double b() const noexcept { return nodes_.back(); }
  [[nodiscard]] std::size_t cell_count() const noexcept { return nodes_.size() - 1; }
  [[nodiscard]] double grading() const noexcept { return grading_; }
  [[nodiscard]] SingularEnd singular_end() const noexcept { return end_; }
  [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
  [[nodiscard]] double node(std::size_t i) const { return nodes_.at(i); }

 private:
  std::vector<double> nodes_;
  double grading_;
  SingularEnd end_;
};

/// Integrand (s-a)^p (b-s)^q smooth_part(s) on (a, b) with p, q > -1.
struct SingularIntegrand {
  std::function<double(double)> smooth_part;
  double a = 0.0;
  double b = 1.0;
  double p = 0.0;
  double q = 0.0;
};

/// Gauss-Jacobi quadrature of a SingularIntegrand.
[[nodiscard]] double jacobi_weighted_integral(const SingularIntegrand& f, std::size_t nodes = 32);

/// Integral over (a, b) of g, where g(s) ~ (s-a)^p near a with p > -1.
///
/// Composite Gauss-Legendre on a left-graded mesh with r = max(1, 2/(1+p)); the first cell is
/// layered geometrically around a Jacobi-weighted core and wide-ratio cells are split.
[[nodiscard]] double graded_time_quadrature(const std::function<double(double)>& g, double a, double b,
                                            double p, std::size_t n_cells = 64, std::size_t points = 8);

/// Product-integration weights w_i with
///   sum_i w_i f_i = int_{a}^{t} (t-s)^{alpha-1} E_{alpha,alpha}(-lambda (t-s)^alpha) f_h(s) ds,
/// f_h the piecewise-linear interpolant of nodal values f_i. Nodes beyond t get weight 0.
[[nodiscard]] std::vector<double> duhamel_weights(double alpha, double lambda, const GradedMesh& mesh,
                                                  double t);

/// Product-integration value of the Duhamel convolution over [mesh.a(), t], t <= mesh.b().
[[nodiscard]] double duhamel_convolve(double alpha, double lambda, const GradedMesh& mesh,
                                      std::span<const double> samples, double t);

/// Weights c_i with sum_i c_i f_i = int_a^t K(t-s) f_h'(s) ds for the piecewise-constant
/// derivative of the interpolant; K is the Duhamel kernel.
[[nodiscard]] std::vector<double> duhamel_slope_weights(double alpha, double lambda, const GradedMesh& mesh,
                                                        double t);

/// Layout of a composite rule for memory integrals over one segment.
struct HistoryRuleOptions {
  std::size_t points = 10;          ///< Gauss-Legendre points per cell
  std::size_t jacobi_points = 32;   ///< Gauss-Jacobi points on the innermost cell
  std::size_t middle_cells = 8;     ///< uniform cells between the graded ends
  std::size_t right_layers = 10;    ///< geometric layers toward the right end
  double layer_ratio = 1.0 / 3.0;   ///< geometric ratio of the graded layers
  double inner_tolerance = 1e-4;    ///< target (delta/width)^p1 for the innermost cell
};

/// Composite rule on [a, b] for integrands v(s) with v(s) ~ (s-a)^{p} at the left end.
///
/// Callers sample v at `nodes()` once and then evaluate integrals of the form
/// int_a^b (t-s)^{-mu} v(s) ds for any t >= b (mu < 1 when t == b). Cells close
/// to t are handled by product integration of the cell's interpolating polynomial.
class HistoryRule {
 public:
  HistoryRule(double a, double b, double left_exponent, const HistoryRuleOptions& options = {});

  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] double left_exponent() const noexcept { return p_; }
  [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }

  /// int_a^b (t-s)^{-mu} v(s) ds from samples v(nodes()[i]).
  [[nodiscard]] double integrate(std::span<const double> values, double t, double mu) const;

  /// int_a^b v(s) ds from the same samples.
  [[nodiscard]] double integrate(std::span<const double> values) const;

 private:
  struct Cell {
    double lo;
    double hi;
    std::size_t first;  // index of the first node
    bool jacobi;
  };

  double cell_near(const Cell& cell, std::span<const double> values, double t, double mu) const;

  double a_;
  double b_;
  double p_;
  std::vector<Cell> cells_;
  std::vector<double> nodes_;
  std::vector<double> weights_;  // plain weights; Jacobi cell weights include (s-a)^p
  std::shared_ptr<const QuadratureRule> legendre_;
  std::shared_ptr<const QuadratureRule> jacobi_;
  std::vector<double> barycentric_;
};

/// (1/Gamma(1-beta_cur)) int_{t_k}^{t_{k+1}} (t-s)^{-beta_cur} v'(s) ds for a derivative
/// with left-endpoint exponent `vprime_exponent`, t >= t_{k+1}.
[[nodiscard]] double history_integral(double beta_cur, double t_k, double t_k1,
                                      const std::function<double(double)>& vprime, double vprime_exponent,
                                      double t, const HistoryRuleOptions& options = {});

}  // namespace fracstep
