#include "fracstep/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracstep/errors.hpp"

namespace fracstep {

SourceTerm SourceTerm::separable(std::vector<SeparablePart> parts) {
  SourceTerm s;
  for (auto& part : parts) {
    if (!part.shape || !part.profile) throw DomainError("separable source part needs a shape and a profile");
  }
  s.parts_ = std::move(parts);
  return s;
}

SourceTerm SourceTerm::general(std::function<double(double, double)> f, std::function<double(double, double)> f_t) {
  if (!f) throw DomainError("general source needs a callable");
  SourceTerm s;
  s.general_ = std::move(f);
  s.general_t_ = std::move(f_t);
  return s;
}

bool SourceTerm::has_time_derivative() const noexcept {
  if (general_) return static_cast<bool>(general_t_);
  return std::all_of(parts_.begin(), parts_.end(),
                     [](const SeparablePart& p) { return static_cast<bool>(p.profile_derivative); });
}

double SourceTerm::operator()(double x, double t) const {
  if (general_) return general_(x, t);
  double sum = 0.0;
  for (const auto& p : parts_) sum += p.shape(x) * p.profile(t);
  return sum;
}

double SourceTerm::time_derivative(double x, double t) const {
  if (!has_time_derivative()) throw DomainError("source has no registered time derivative");
  if (general_) return general_t_(x, t);
  double sum = 0.0;
  for (const auto& p : parts_) sum += p.shape(x) * p.profile_derivative(t);
  return sum;
}

SourceTerm SourceTerm::scaled(double factor) const {
  SourceTerm s = *this;
  if (general_) {
    s.general_ = [g = general_, factor](double x, double t) { return factor * g(x, t); };
    if (general_t_) s.general_t_ = [g = general_t_, factor](double x, double t) { return factor * g(x, t); };
    return s;
  }
  for (auto& p : s.parts_) p.shape = [g = p.shape, factor](double x) { return factor * g(x); };
  return s;
}

ProjectedSource::ProjectedSource(const SourceTerm& source, const EigenSystem& system, double horizon)
    : source_(&source), system_(&system), horizon_(horizon), modes_(system.size()), zero_(source.is_zero()) {
  if (source.general_) return;
  for (const auto& part : source.parts_) {
    part_coeffs_.push_back(system.project(part.shape));
    if (!part.profile_derivative) profile_derivatives_ = false;
  }
}

void ProjectedSource::values(double t, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (zero_) return;
  if (source_->general_) {
    const auto grid = system_->grid();
    std::vector<double> samples(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = source_->general_(grid[i], t);
    const std::vector<double> c = system_->project_samples(samples);
    std::copy(c.begin(), c.end(), out.begin());
    return;
  }
  for (std::size_t p = 0; p < part_coeffs_.size(); ++p) {
    const double g = source_->parts_[p].profile(t);
    for (std::size_t n = 0; n < modes_; ++n) out[n] += part_coeffs_[p][n] * g;
  }
}

void ProjectedSource::derivatives(double t, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (zero_) return;
  if (source_->general_ && source_->general_t_) {
    const auto grid = system_->grid();
    std::vector<double> samples(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = source_->general_t_(grid[i], t);
    const std::vector<double> c = system_->project_samples(samples);
    std::copy(c.begin(), c.end(), out.begin());
    return;
  }
  if (!source_->general_ && profile_derivatives_) {
    for (std::size_t p = 0; p < part_coeffs_.size(); ++p) {
      const double g = source_->parts_[p].profile_derivative(t);
      for (std::size_t n = 0; n < modes_; ++n) out[n] += part_coeffs_[p][n] * g;
    }
    return;
  }
  // Centered differences, one-sided at the ends of [0, T]; the step shrinks near t = 0.
  const double h = t > 0.0 ? std::min(1e-6 * horizon_, 1e-4 * t) : 1e-6 * horizon_;
  const double lo = std::max(0.0, t - h);
  const double hi = std::min(horizon_, t + h);
  std::vector<double> a(modes_);
  std::vector<double> b(modes_);
  values(lo, a);
  values(hi, b);
  for (std::size_t n = 0; n < modes_; ++n) out[n] = (b[n] - a[n]) / (hi - lo);
}

std::vector<double> ProblemSpec::regularity_exponents() const {
  if (epsilons.empty()) return schedule.default_epsilons();
  if (epsilons.size() != schedule.segment_count()) {
    throw DomainError("one regularity exponent is required per segment");
  }
  for (std::size_t j = 0; j < epsilons.size(); ++j) {
    const double e = epsilons[j];
    if (!(e > 0.0 && e < 1.0 - schedule.order(j))) {
      std::ostringstream msg;
      msg << "regularity exponent eps_" << j << "=" << e << " must lie in (0, 1-beta_j) = (0, "
          << 1.0 - schedule.order(j) << ")";
      throw HypothesisViolation(msg.str());
    }
  }
  return epsilons;
}

void ProblemSpec::validate() const {
  op.validate();
  if (modes == 0) throw DomainError("mode count must be positive");
  if (!initial) throw DomainError("initial data is not set");
  if (quad.cells == 0) throw DomainError("quadrature cell count must be positive");
  if (!(quad.grading >= 1.0)) throw DomainError("grading exponent must be >= 1");
  if (backend == OperatorBackend::analytic && !op.constant) {
    throw DomainError("analytic backend needs constant coefficients");
  }
  (void)regularity_exponents();
}

EigenSystem ProblemSpec::build_eigensystem() const {
  if (backend == OperatorBackend::analytic) return analytic_dirichlet_eigensystem(op, modes, spatial_points);
  if (spatial_points < 2) throw DomainError("finite-difference grid needs at least two intervals");
  return discrete_sturm_liouville_eigensystem(op, spatial_points - 1, modes);
}

ProblemSpec ProblemSpec::scaled(double factor) const {
  ProblemSpec s = *this;
  s.initial = [g = initial, factor](double x) { return factor * g(x); };
  s.source = source.scaled(factor);
  return s;
}

double sine_mode(std::size_t n, double length, double x) {
  if (x <= 0.0 || x >= length) return 0.0;
  return std::sqrt(2.0 / length) * std::sin(static_cast<double>(n) * std::numbers::pi * x / length);
}

}  // namespace fracstep
