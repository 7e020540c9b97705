#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracstep/order_schedule.hpp"
#include "fracstep/problem.hpp"

namespace fracstep {

/// Uniform time grid t_m = m tau whose nodes include every breakpoint.
class L1Grid {
 public:
  /// Throws DomainError unless tau divides every segment width to within 1e-12 relative.
  static L1Grid aligned(const OrderSchedule& schedule, double tau);

  [[nodiscard]] double step() const noexcept { return tau_; }
  [[nodiscard]] std::span<const double> times() const noexcept { return times_; }
  [[nodiscard]] std::size_t steps() const noexcept { return times_.size() - 1; }
  /// Order beta(t_m), right-continuous, for m >= 1.
  [[nodiscard]] double order(std::size_t m) const { return orders_.at(m); }

 private:
  double tau_ = 0.0;
  std::vector<double> times_;
  std::vector<double> orders_;
};

/// L1 weights b_0..b_{m-1} for (1/Gamma(1-beta)) int_0^{t_m} (t_m-s)^{-beta} u'(s) ds,
/// applied to the differences u_{k+1} - u_k.
[[nodiscard]] std::vector<double> l1_weights(double order, std::size_t m, double tau);

/// Implicit L1 march of D^{beta(t)} u + lambda u = f(t), u(0) = u0, with beta taken at t_m.
[[nodiscard]] std::vector<double> solve_mode_l1(double lambda, const std::function<double(double)>& f,
                                                const OrderSchedule& schedule, double u0, const L1Grid& grid);

/// u(x_i, t_m) on a tensor grid; values are row-major by time.
struct SpaceTimeArray {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> values;

  [[nodiscard]] double at(std::size_t m, std::size_t i) const { return values.at(m * x.size() + i); }
  [[nodiscard]] std::span<const double> slice(std::size_t m) const {
    return std::span<const double>(values).subspan(m * x.size(), x.size());
  }
};

/// L1 in time with the symmetric three-point finite-difference operator on
/// `spatial_points` uniform intervals; Dirichlet values are exactly zero.
[[nodiscard]] SpaceTimeArray solve_full_l1_fd(const ProblemSpec& spec, const L1Grid& grid,
                                              std::size_t spatial_points);

}  // namespace fracstep
