#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracstep {

/// Piecewise-constant fractional order: beta(t) = beta_j on [t_j, t_{j+1}).
///
/// Breakpoints satisfy 0 = t_0 < t_1 < ... < t_M = T and every order lies in
/// the open interval (0, 1). Segments narrower than 1e-12 * T are rejected.
class OrderSchedule {
 public:
  OrderSchedule(std::vector<double> breakpoints, std::vector<double> orders);

  /// Single segment [0, horizon) with constant order.
  static OrderSchedule constant(double order, double horizon);

  [[nodiscard]] std::size_t segment_count() const noexcept { return orders_.size(); }
  [[nodiscard]] double horizon() const noexcept { return breakpoints_.back(); }
  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] std::span<const double> orders() const noexcept { return orders_; }

  [[nodiscard]] double start(std::size_t j) const { return breakpoints_.at(j); }
  [[nodiscard]] double end(std::size_t j) const { return breakpoints_.at(j + 1); }
  [[nodiscard]] double width(std::size_t j) const { return end(j) - start(j); }
  [[nodiscard]] double order(std::size_t j) const { return orders_.at(j); }
  [[nodiscard]] double min_order() const noexcept;

  /// Unique j with t_j <= t < t_{j+1}. Throws DomainError outside [0, T).
  [[nodiscard]] std::size_t segment_index(double t) const;

  /// Segment whose closure contains t; T maps to the last segment.
  [[nodiscard]] std::size_t closed_segment_index(double t) const;

  /// Right-continuous order lookup beta(t) for t in [0, T).
  [[nodiscard]] double order_at(double t) const;

  /// Append `tail`, whose clock starts at 0, shifted to begin at this horizon.
  [[nodiscard]] OrderSchedule concatenate(const OrderSchedule& tail) const;

  /// Default regularity exponents eps_j = (1 - beta_j) / 2.
  [[nodiscard]] std::vector<double> default_epsilons() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> orders_;
};

}  // namespace fracstep
