#include "fracstep/spectral_operator.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracstep/errors.hpp"

namespace fracstep {

OperatorSpec OperatorSpec::constant_coefficients(double length, double a, double c) {
  OperatorSpec spec;
  spec.length = length;
  spec.constant = true;
  spec.a_value = a;
  spec.c_value = c;
  spec.diffusivity = [a](double) { return a; };
  spec.reaction = [c](double) { return c; };
  return spec;
}

OperatorSpec OperatorSpec::sampled_coefficients(double length, std::function<double(double)> a,
                                                std::function<double(double)> c) {
  OperatorSpec spec;
  spec.length = length;
  spec.constant = false;
  spec.diffusivity = std::move(a);
  spec.reaction = std::move(c);
  return spec;
}

double OperatorSpec::ellipticity_floor(std::size_t samples) const {
  if (constant) return a_value;
  double lo = diffusivity(0.0);
  for (std::size_t i = 1; i < samples; ++i) lo = std::min(lo, diffusivity(length * i / (samples - 1.0)));
  return lo;
}

double OperatorSpec::reaction_floor(std::size_t samples) const {
  if (constant) return std::max(0.0, -c_value);
  double lo = reaction(0.0);
  for (std::size_t i = 1; i < samples; ++i) lo = std::min(lo, reaction(length * i / (samples - 1.0)));
  return std::max(0.0, -lo);
}

void OperatorSpec::validate(std::size_t samples) const {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("domain length must be positive");
  if (!diffusivity || !reaction) throw DomainError("operator coefficients are not set");
  const double a_min = ellipticity_floor(samples);
  if (!(a_min > 0.0) || !std::isfinite(a_min)) {
    std::ostringstream msg;
    msg << "diffusivity must stay positive; minimum sample is " << a_min;
    throw CoercivityError(msg.str());
  }
  const double c0 = reaction_floor(samples);
  const double kappa = std::numbers::pi / length;
  if (!(c0 < a_min * kappa * kappa)) {
    std::ostringstream msg;
    msg << "reaction floor c_0=" << c0 << " is not below a_min*(pi/L)^2=" << a_min * kappa * kappa;
    throw CoercivityError(msg.str());
  }
}

double EigenSystem::eigenfunction(std::size_t k, double x) const {
  if (k >= size()) throw DomainError("mode index out of range");
  if (!(x >= 0.0 && x <= length_)) {
    std::ostringstream msg;
    msg << "point " << x << " outside [0, " << length_ << "]";
    throw DomainError(msg.str());
  }
  if (backend_ == Backend::analytic) {
    if (x == 0.0 || x == length_) return 0.0;
    return std::sqrt(2.0 / length_) * std::sin((k + 1.0) * std::numbers::pi * x / length_);
  }
  // Piecewise-linear interpolation of the grid eigenvector.
  const std::size_t cells = grid_.size() - 1;
  const double h = length_ / static_cast<double>(cells);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(x / h), cells - 1);
  const double frac = (x - grid_[i]) / h;
  const double* row = basis_.data() + k * grid_.size();
  return (1.0 - frac) * row[i] + frac * row[i + 1];
}

double EigenSystem::inner(std::span<const double> f, std::span<const double> g) const {
  if (f.size() != grid_.size() || g.size() != grid_.size()) throw DomainError("field shape does not match grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) sum += weights_[i] * f[i] * g[i];
  return sum;
}

std::vector<double> EigenSystem::project(const std::function<double(double)>& field) const {
  std::vector<double> samples(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) samples[i] = field(grid_[i]);
  return project_samples(samples);
}

std::vector<double> EigenSystem::project_samples(std::span<const double> samples) const {
  if (samples.size() != grid_.size()) throw DomainError("field shape does not match grid");
  std::vector<double> coeffs(size());
  const std::size_t m = grid_.size();
  for (std::size_t k = 0; k < size(); ++k) {
    const double* row = basis_.data() + k * m;
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += weights_[i] * samples[i] * row[i];
    coeffs[k] = sum;
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw NumericError("projection produced a non-finite coefficient");
  }
  return coeffs;
}

std::vector<double> EigenSystem::synthesize(std::span<const double> coeffs, std::span<const double> points) const {
  if (coeffs.size() > size()) throw DomainError("more coefficients than modes");
  std::vector<double> out(points.size(), 0.0);
  for (std::size_t p = 0; p < points.size(); ++p) {
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] != 0.0) sum += coeffs[k] * eigenfunction(k, points[p]);
    }
    out[p] = sum;
  }
  return out;
}

double EigenSystem::graph_norm(std::span<const double> coeffs) const {
  if (coeffs.size() > size()) throw DomainError("more coefficients than modes");
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double v = eigenvalues_[k] * coeffs[k];
    sum += v * v;
  }
  return std::sqrt(sum);
}

double EigenSystem::parseval_defect(std::span<const double> samples) const {
  const std::vector<double> coeffs = project_samples(samples);
  double coeff_sq = 0.0;
  for (double c : coeffs) coeff_sq += c * c;
  return inner(samples, samples) - coeff_sq;
}

EigenSystem analytic_dirichlet_eigensystem(const OperatorSpec& spec, std::size_t modes,
                                           std::size_t spatial_intervals) {
  if (!spec.constant) throw DomainError("analytic backend needs constant coefficients");
  spec.validate();
  if (modes == 0) throw DomainError("mode count must be positive");
  std::size_t intervals = std::max<std::size_t>(spatial_intervals, 2);
  if (intervals % 2 == 1) ++intervals;
  if (modes >= intervals / 2) throw DomainError("spatial grid too coarse for the requested mode count");

  EigenSystem sys;
  sys.backend_ = EigenSystem::Backend::analytic;
  sys.length_ = spec.length;
  const double L = spec.length;
  for (std::size_t n = 1; n <= modes; ++n) {
    const double k = n * std::numbers::pi / L;
    sys.eigenvalues_.push_back(spec.a_value * k * k + spec.c_value);
  }
  const double h = L / static_cast<double>(intervals);
  sys.grid_.resize(intervals + 1);
  sys.weights_.resize(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    sys.grid_[i] = i * h;
    const double simpson = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sys.weights_[i] = simpson * h / 3.0;
  }
  sys.grid_.back() = L;
  sys.basis_.resize(modes * (intervals + 1));
  for (std::size_t k = 0; k < modes; ++k) {
    for (std::size_t i = 0; i <= intervals; ++i) sys.basis_[k * (intervals + 1) + i] = sys.eigenfunction(k, sys.grid_[i]);
  }
  return sys;
}

EigenSystem discrete_sturm_liouville_eigensystem(const OperatorSpec& spec, std::size_t interior_points,
                                                 std::size_t modes) {
  spec.validate();
  if (modes == 0) throw DomainError("mode count must be positive");
  if (modes > interior_points) throw DomainError("more modes requested than interior grid points");
  if (interior_points < modes + 2) throw DomainError("finite-difference grid needs at least N + 2 interior points");

  const std::size_t P = interior_points;
  const double L = spec.length;
  const double h = L / static_cast<double>(P + 1);
  std::vector<double> diag(P);
  std::vector<double> off(P > 1 ? P - 1 : 1);
  for (std::size_t i = 0; i < P; ++i) {
    const double x = (i + 1) * h;
    const double a_minus = spec.diffusivity(x - 0.5 * h);
    const double a_plus = spec.diffusivity(x + 0.5 * h);
    diag[i] = (a_minus + a_plus) / (h * h) + spec.reaction(x);
    if (i + 1 < P) off[i] = -a_plus / (h * h);
  }

  std::vector<double> w(P);
  std::vector<double> z(P * modes);
  std::vector<lapack_int> ifail(P);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', static_cast<lapack_int>(P), diag.data(),
                                         off.data(), 0.0, 0.0, 1, static_cast<lapack_int>(modes), 0.0, &found,
                                         w.data(), z.data(), static_cast<lapack_int>(P), ifail.data());
  if (info != 0 || found != static_cast<lapack_int>(modes)) {
    std::ostringstream msg;
    msg << "tridiagonal eigensolve did not converge (info=" << info << ")";
    throw NumericError(msg.str());
  }

  EigenSystem sys;
  sys.backend_ = EigenSystem::Backend::finite_difference;
  sys.length_ = L;
  sys.eigenvalues_.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(modes));
  if (!(sys.eigenvalues_.front() > 0.0)) throw CoercivityError("discrete operator has a nonpositive eigenvalue");
  sys.grid_.resize(P + 2);
  sys.weights_.assign(P + 2, h);
  for (std::size_t i = 0; i < P + 2; ++i) sys.grid_[i] = i * h;
  sys.grid_.back() = L;
  sys.weights_.front() = 0.5 * h;
  sys.weights_.back() = 0.5 * h;
  sys.basis_.assign(modes * (P + 2), 0.0);
  for (std::size_t k = 0; k < modes; ++k) {
    const double* col = z.data() + k * P;
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < P; ++i) norm_sq += col[i] * col[i];
    // Unit slope sign at x = 0, matching sin(n pi x / L).
    double scale = 1.0 / std::sqrt(h * norm_sq);
    if (col[0] < 0.0) scale = -scale;
    for (std::size_t i = 0; i < P; ++i) sys.basis_[k * (P + 2) + i + 1] = scale * col[i];
  }
  return sys;
}

}  // namespace fracstep
