#include "fracstep/order_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracstep/errors.hpp"

namespace fracstep {

namespace {
constexpr double kMinRelativeWidth = 1e-12;
}

OrderSchedule::OrderSchedule(std::vector<double> breakpoints, std::vector<double> orders)
    : breakpoints_(std::move(breakpoints)), orders_(std::move(orders)) {
  if (orders_.empty()) throw ScheduleError("schedule needs at least one segment");
  if (breakpoints_.size() != orders_.size() + 1) {
    std::ostringstream msg;
    msg << "schedule has " << breakpoints_.size() << " breakpoints for " << orders_.size()
        << " orders; expected one more breakpoint than orders";
    throw ScheduleError(msg.str());
  }
  for (double t : breakpoints_) {
    if (!std::isfinite(t)) throw ScheduleError("breakpoints must be finite");
  }
  if (breakpoints_.front() != 0.0) throw ScheduleError("first breakpoint must be 0");
  const double horizon = breakpoints_.back();
  if (!(horizon > 0.0)) throw ScheduleError("horizon must be positive");
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    if (!(breakpoints_[j + 1] - breakpoints_[j] >= kMinRelativeWidth * horizon)) {
      std::ostringstream msg;
      msg << "breakpoints must be strictly increasing with width >= 1e-12*T (segment " << j << ")";
      throw ScheduleError(msg.str());
    }
    const double b = orders_[j];
    if (!(b > 0.0 && b < 1.0)) {
      std::ostringstream msg;
      msg << "order " << b << " of segment " << j << " is outside (0,1)";
      throw ScheduleError(msg.str());
    }
  }
}

OrderSchedule OrderSchedule::constant(double order, double horizon) {
  return OrderSchedule({0.0, horizon}, {order});
}

double OrderSchedule::min_order() const noexcept {
  return *std::min_element(orders_.begin(), orders_.end());
}

std::size_t OrderSchedule::segment_index(double t) const {
  if (!(t >= 0.0 && t < horizon())) {
    std::ostringstream msg;
    msg << "time " << t << " outside [0, " << horizon() << ")";
    throw DomainError(msg.str());
  }
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

std::size_t OrderSchedule::closed_segment_index(double t) const {
  if (t == horizon()) return segment_count() - 1;
  return segment_index(t);
}

double OrderSchedule::order_at(double t) const { return orders_[segment_index(t)]; }

OrderSchedule OrderSchedule::concatenate(const OrderSchedule& tail) const {
  if (tail.breakpoints_.size() < 2) throw ScheduleError("empty tail schedule");
  std::vector<double> bps = breakpoints_;
  std::vector<double> ords = orders_;
  const double shift = horizon();
  for (std::size_t i = 1; i < tail.breakpoints_.size(); ++i) bps.push_back(shift + tail.breakpoints_[i]);
  ords.insert(ords.end(), tail.orders_.begin(), tail.orders_.end());
  return OrderSchedule(std::move(bps), std::move(ords));
}

std::vector<double> OrderSchedule::default_epsilons() const {
  std::vector<double> eps(orders_.size());
  std::transform(orders_.begin(), orders_.end(), eps.begin(), [](double b) { return 0.5 * (1.0 - b); });
  return eps;
}

}  // namespace fracstep
