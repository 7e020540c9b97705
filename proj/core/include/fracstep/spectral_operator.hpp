#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracstep {

/// Elliptic operator L u = -(a(x) u')' + c(x) u on (0, length) with Dirichlet conditions.
struct OperatorSpec {
  double length = 1.0;
  std::function<double(double)> diffusivity;
  std::function<double(double)> reaction;
  /// Set when the coefficients are constant; required by the analytic backend.
  bool constant = false;
  double a_value = 1.0;
  double c_value = 0.0;

  static OperatorSpec constant_coefficients(double length, double a, double c);
  static OperatorSpec sampled_coefficients(double length, std::function<double(double)> a,
                                           std::function<double(double)> c);

  /// Smallest diffusivity (ellipticity floor) over `samples` uniform points.
  [[nodiscard]] double ellipticity_floor(std::size_t samples = 2049) const;
  /// c_0 = max(0, -min c(x)) over `samples` uniform points.
  [[nodiscard]] double reaction_floor(std::size_t samples = 2049) const;
  /// Throws CoercivityError unless a_min > 0 and c_0 < a_min (pi/L)^2.
  void validate(std::size_t samples = 2049) const;
};

/// Truncated eigensystem {lambda_n, X_n}, n = 1..N, with projection and synthesis.
///
/// Mode indices in the API are zero-based: index k holds lambda_{k+1}.
class EigenSystem {
 public:
  enum class Backend { analytic, finite_difference };

  [[nodiscard]] std::size_t size() const noexcept { return eigenvalues_.size(); }
  [[nodiscard]] double length() const noexcept { return length_; }
  [[nodiscard]] Backend backend() const noexcept { return backend_; }
  [[nodiscard]] std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  [[nodiscard]] double eigenvalue(std::size_t k) const { return eigenvalues_.at(k); }

  /// Spatial grid x_0 = 0 < ... < x_P = L used for projections.
  [[nodiscard]] std::span<const double> grid() const noexcept { return grid_; }
  /// Inner-product weights on the grid.
  [[nodiscard]] std::span<const double> grid_weights() const noexcept { return weights_; }

  /// X_{k+1}(x) for x in [0, L].
  [[nodiscard]] double eigenfunction(std::size_t k, double x) const;

  /// Discrete inner product of two grid-sampled fields.
  [[nodiscard]] double inner(std::span<const double> f, std::span<const double> g) const;

  /// Coefficients <field, X_n> of a callable field.
  [[nodiscard]] std::vector<double> project(const std::function<double(double)>& field) const;
  /// Coefficients of a field sampled on grid().
  [[nodiscard]] std::vector<double> project_samples(std::span<const double> samples) const;

  /// sum_n coeffs_n X_n(x) at each point.
  [[nodiscard]] std::vector<double> synthesize(std::span<const double> coeffs, std::span<const double> points) const;

  /// (sum lambda_n^2 coeffs_n^2)^{1/2}.
  [[nodiscard]] double graph_norm(std::span<const double> coeffs) const;

  /// Squared grid norm minus the squared coefficient norm (Bessel defect).
  [[nodiscard]] double parseval_defect(std::span<const double> samples) const;

  friend EigenSystem analytic_dirichlet_eigensystem(const OperatorSpec& spec, std::size_t modes,
                                                    std::size_t spatial_intervals);
  friend EigenSystem discrete_sturm_liouville_eigensystem(const OperatorSpec& spec, std::size_t interior_points,
                                                          std::size_t modes);

 private:
  EigenSystem() = default;

  Backend backend_ = Backend::analytic;
  double length_ = 1.0;
  std::vector<double> eigenvalues_;
  std::vector<double> grid_;
  std::vector<double> weights_;
  std::vector<double> basis_;  // size() x grid().size(), row-major
};

/// lambda_n = a (n pi / L)^2 + c, X_n = sqrt(2/L) sin(n pi x / L); Simpson projections on
/// `spatial_intervals` uniform intervals (rounded up to even).
[[nodiscard]] EigenSystem analytic_dirichlet_eigensystem(const OperatorSpec& spec, std::size_t modes,
                                                         std::size_t spatial_intervals = 1024);

/// N smallest eigenpairs of the symmetric second-order finite-difference operator on
/// `interior_points` interior nodes; eigenvectors orthonormal in the trapezoid inner product.
[[nodiscard]] EigenSystem discrete_sturm_liouville_eigensystem(const OperatorSpec& spec,
                                                               std::size_t interior_points, std::size_t modes);

}  // namespace fracstep
