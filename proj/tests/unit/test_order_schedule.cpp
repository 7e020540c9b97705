#include <gtest/gtest.h>

#include <random>

#include "fracstep/errors.hpp"
#include "fracstep/order_schedule.hpp"

using fracstep::DomainError;
using fracstep::OrderSchedule;
using fracstep::ScheduleError;

TEST(OrderSchedule, SingleSegmentLookup) {
  const auto s = OrderSchedule::constant(0.5, 1.0);
  EXPECT_EQ(s.order_at(0.3), 0.5);
  EXPECT_EQ(s.segment_count(), 1u);
  EXPECT_EQ(s.horizon(), 1.0);
}

TEST(OrderSchedule, RightContinuousAtBreakpoint) {
  const OrderSchedule s({0.0, 0.5, 1.0}, {0.3, 0.8});
  EXPECT_EQ(s.order_at(0.5), 0.8);
  EXPECT_EQ(s.order_at(0.499), 0.3);
  EXPECT_EQ(s.segment_index(0.0), 0u);
  EXPECT_EQ(s.segment_index(0.5), 1u);
}

TEST(OrderSchedule, SegmentIndexBinarySearch) {
  const OrderSchedule s({0.0, 0.25, 0.5, 1.0}, {0.2, 0.4, 0.6});
  EXPECT_EQ(s.segment_index(0.7), 2u);
  EXPECT_EQ(s.segment_index(0.25), 1u);
  EXPECT_EQ(s.closed_segment_index(1.0), 2u);
}

TEST(OrderSchedule, OutOfRangeTimesThrow) {
  const OrderSchedule s({0.0, 0.5, 1.0}, {0.3, 0.8});
  EXPECT_THROW((void)s.order_at(1.0), DomainError);
  EXPECT_THROW((void)s.order_at(-1e-12), DomainError);
  EXPECT_THROW((void)s.segment_index(2.0), DomainError);
}

TEST(OrderSchedule, RejectsInvalidConstruction) {
  EXPECT_THROW(OrderSchedule({0.0, 1.0}, {0.0}), ScheduleError);
  EXPECT_THROW(OrderSchedule({0.0, 1.0}, {1.0}), ScheduleError);
  EXPECT_THROW(OrderSchedule({0.0, 1.0}, {1.2}), ScheduleError);
  EXPECT_THROW(OrderSchedule({0.0, 0.6, 0.5}, {0.3, 0.4}), ScheduleError);
  EXPECT_THROW(OrderSchedule({0.1, 1.0}, {0.3}), ScheduleError);
  EXPECT_THROW(OrderSchedule({0.0, 0.5, 1.0}, {0.3}), ScheduleError);
  EXPECT_THROW(OrderSchedule({0.0}, {}), ScheduleError);
  EXPECT_THROW(OrderSchedule({0.0, 0.5, 0.5, 1.0}, {0.3, 0.4, 0.5}), ScheduleError);
}

TEST(OrderSchedule, ConcatenateShiftsTail) {
  const OrderSchedule head({0.0, 0.5}, {0.3});
  const OrderSchedule tail({0.0, 0.25, 0.5}, {0.6, 0.9});
  const auto joined = head.concatenate(tail);
  ASSERT_EQ(joined.segment_count(), 3u);
  EXPECT_DOUBLE_EQ(joined.start(2), 0.75);
  EXPECT_DOUBLE_EQ(joined.horizon(), 1.0);
  EXPECT_EQ(joined.order(1), 0.6);
}

TEST(OrderSchedule, DefaultEpsilonsAreInsideAdmissibleRange) {
  const OrderSchedule s({0.0, 0.5, 1.0}, {0.3, 0.8});
  const auto eps = s.default_epsilons();
  ASSERT_EQ(eps.size(), 2u);
  EXPECT_DOUBLE_EQ(eps[0], 0.35);
  EXPECT_DOUBLE_EQ(eps[1], 0.1);
}

TEST(OrderScheduleProperty, LookupMatchesLinearScan) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 6;
    std::vector<double> bp{0.0};
    std::vector<double> orders;
    for (std::size_t j = 0; j < m; ++j) {
      bp.push_back(bp.back() + 0.05 + unit(rng));
      orders.push_back(0.01 + 0.98 * unit(rng));
    }
    const OrderSchedule s(bp, orders);
    for (int k = 0; k < 50; ++k) {
      const double t = unit(rng) * s.horizon();
      std::size_t expected = 0;
      while (expected + 1 < m && bp[expected + 1] <= t) ++expected;
      ASSERT_EQ(s.segment_index(t), expected);
      ASSERT_EQ(s.order_at(t), orders[expected]);
      ASSERT_LE(s.start(expected), t);
      ASSERT_LT(t, s.end(expected));
    }
  }
}
