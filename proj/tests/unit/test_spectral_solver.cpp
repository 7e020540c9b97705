#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracstep/errors.hpp"
#include "fracstep/problem.hpp"
#include "fracstep/spectral_solver.hpp"
#include "fracstep/special_functions.hpp"

using namespace fracstep;
using std::numbers::pi;

namespace {

constexpr double kConstSourceMode = 0.2191823807843202192070324;
constexpr double kRelaxation = 0.1121128758354298017896823;

ProblemSpec base_problem(OrderSchedule schedule, std::size_t modes = 4) {
  ProblemSpec p;
  p.schedule = std::move(schedule);
  p.modes = modes;
  return p;
}

SourceTerm sine_source(std::size_t n, std::function<double(double)> profile, std::function<double(double)> dprofile) {
  return SourceTerm::separable({{[n](double x) { return sine_mode(n, 1.0, x); }, std::move(profile),
                                 std::move(dprofile)}});
}

ProblemSpec two_segment_forced() {
  auto p = base_problem(OrderSchedule({0.0, 0.4, 1.0}, {0.3, 0.8}), 6);
  p.initial = [](double x) { return x * (1.0 - x); };
  p.source = SourceTerm::separable(
      {{[](double x) { return sine_mode(1, 1.0, x); }, [](double t) { return 1.0 + t; }, [](double) { return 1.0; }},
       {[](double x) { return sine_mode(3, 1.0, x); }, [](double t) { return std::cos(2.0 * t); },
        [](double t) { return -2.0 * std::sin(2.0 * t); }}});
  return p;
}

}  // namespace

TEST(SpectralSolver, ConstantSourceModeFrozenValue) {
  auto p = base_problem(OrderSchedule::constant(0.4, 1.0));
  p.initial = [](double x) { return 0.8 * sine_mode(1, 1.0, x); };
  p.source = sine_source(1, [](double) { return 1.5; }, [](double) { return 0.0; });
  const auto field = solve(p);
  EXPECT_NEAR(field.mode_value(0, 0.3), kConstSourceMode, 1e-9);
  EXPECT_NEAR(field.mode_value(1, 0.3), 0.0, 1e-12);
}

TEST(SpectralSolver, PureRelaxationFrozenValue) {
  auto p = base_problem(OrderSchedule::constant(0.5, 1.0));
  p.initial = [](double x) { return sine_mode(1, 1.0, x); };
  const auto field = solve(p);
  EXPECT_NEAR(field.mode_value(0, 0.25), kRelaxation, 1e-10);
  EXPECT_NEAR(field.evaluate(0.5, 0.25), kRelaxation * std::sqrt(2.0), 1e-9);
  EXPECT_EQ(field.evaluate(0.0, 0.25), 0.0);
  EXPECT_EQ(field.evaluate(1.0, 0.25), 0.0);
}

TEST(SpectralSolver, ModeValueAtTimeZeroIsInitialCoefficient) {
  const auto field = solve(two_segment_forced());
  for (std::size_t n = 0; n < field.modes(); ++n)
    EXPECT_EQ(field.mode_value(n, 0.0), field.initial_coefficients()[n]);
}

TEST(SpectralSolver, JunctionsAreExactlyContinuous) {
  auto p = two_segment_forced();
  p.schedule = OrderSchedule({0.0, 0.2, 0.5, 1.0}, {0.5, 0.2, 0.9});
  const auto field = solve(p);
  for (std::size_t j = 1; j < 3; ++j) EXPECT_EQ(field.junction_gap(j), 0.0) << j;
}

TEST(SpectralSolver, SegmentationInvariance) {
  // Splitting a constant-order run at an artificial breakpoint must not change the solution.
  auto whole = two_segment_forced();
  whole.schedule = OrderSchedule::constant(0.6, 1.0);
  auto split = whole;
  split.schedule = OrderSchedule({0.0, 0.35, 1.0}, {0.6, 0.6});
  const auto a = solve(whole);
  const auto b = solve(split);
  for (double t : {0.1, 0.35, 0.5, 0.8, 1.0}) {
    for (std::size_t n = 0; n < a.modes(); ++n) {
      EXPECT_NEAR(a.mode_value(n, t), b.mode_value(n, t), 2e-6 * (1.0 + std::abs(a.mode_value(n, t))))
          << n << " " << t;
    }
  }
}

TEST(SpectralSolver, LinearInData) {
  auto p1 = two_segment_forced();
  auto p2 = two_segment_forced();
  p2.initial = [](double x) { return std::sin(5.0 * x) * x * (1.0 - x); };
  p2.source = sine_source(2, [](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); });
  auto sum = p1;
  sum.initial = [&](double x) { return p1.initial(x) + p2.initial(x); };
  sum.source = SourceTerm::general([&](double x, double t) { return p1.source(x, t) + p2.source(x, t); },
                                   [&](double x, double t) {
                                     return p1.source.time_derivative(x, t) + p2.source.time_derivative(x, t);
                                   });
  const auto a = solve(p1), b = solve(p2), c = solve(sum);
  for (double t : {0.05, 0.4, 0.7, 1.0})
    for (std::size_t n = 0; n < a.modes(); ++n)
      EXPECT_NEAR(c.mode_value(n, t), a.mode_value(n, t) + b.mode_value(n, t), 1e-11) << n << " " << t;
}

TEST(SpectralSolver, DerivativeMatchesFiniteDifference) {
  const auto field = solve(two_segment_forced());
  for (double t : {0.05, 0.2, 0.39, 0.45, 0.7, 0.95}) {
    for (std::size_t n = 0; n < 3; ++n) {
      const double h = 1e-5;
      const double fd = (field.mode_value(n, t + h) - field.mode_value(n, t - h)) / (2.0 * h);
      const double d = field.mode_derivative(n, t);
      EXPECT_NEAR(d, fd, 1e-4 * (1.0 + std::abs(d))) << n << " " << t;
    }
  }
  EXPECT_THROW((void)field.mode_derivative(0, 0.4), DomainError);
}

TEST(SpectralSolver, UnforcedModesStayPositiveAndBounded) {
  // Within a constant-order segment the decay is monotone; an order drop may lift a mode slightly.
  auto p = base_problem(OrderSchedule({0.0, 0.3, 0.6, 1.0}, {0.7, 0.2, 0.5}), 5);
  p.initial = [](double x) { return sine_mode(1, 1.0, x) + 0.3 * sine_mode(4, 1.0, x); };
  const auto field = solve(p);
  for (std::size_t n : {0u, 3u}) {
    const double initial = field.mode_value(n, 0.0);
    double previous = initial;
    for (int i = 1; i <= 200; ++i) {
      const double t = i / 200.0;
      const double v = field.mode_value(n, t);
      ASSERT_GT(v, 0.0);
      ASSERT_LT(v, initial);
      if (t < 0.3) {
        ASSERT_LE(v, previous) << n << " " << t;
      }
      previous = v;
    }
  }
}

TEST(SpectralSolver, ThreadCountDoesNotChangeResults) {
  const auto p = two_segment_forced();
  const auto a = solve(p, {.threads = 1});
  const auto b = solve(p, {.threads = 3});
  for (double t : {0.1, 0.4, 0.9})
    for (std::size_t n = 0; n < a.modes(); ++n) EXPECT_EQ(a.mode_value(n, t), b.mode_value(n, t));
}

TEST(SpectralSolver, FirstSegmentSourceIsProjectedSource) {
  const auto field = solve(two_segment_forced());
  const auto& src = field.segment(0, 0).source();
  ASSERT_EQ(src.history_correction.size(), src.base_samples.size());
  for (double c : src.history_correction) EXPECT_EQ(c, 0.0);
  EXPECT_EQ(src.samples(), src.base_samples);
  EXPECT_NEAR(field.segment_source(0, 0, 0.2), 1.2, 1e-10);
}

TEST(SpectralSolver, LaterSegmentSourceMatchesMemoryIntegral) {
  // f_1 = f_0 - (1/Gamma(1-b_1)) int_{I_0} (t-s)^{-b_1} v_0'(s) ds, cross-checked on a fine graded sum.
  const auto field = solve(two_segment_forced(), {.keep_last_history = true});
  const auto& seg0 = field.segment(0, 0);
  const double b1 = 0.8, t = 0.7;
  const double p = 0.3 - 1.0;
  const std::size_t cells = 4000;
  double memory = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    // graded midpoint rule with substitution s = 0.4 u^{1/(1+p)}
    const double u = (i + 0.5) / cells;
    const double q = 1.0 / (1.0 + p);
    const double s = 0.4 * std::pow(u, q);
    const double ds = 0.4 * q * std::pow(u, q - 1.0) / cells;
    memory += std::pow(t - s, -b1) * seg0.derivative(s) * ds;
  }
  const double expected = 1.0 + t - rgamma(1.0 - b1) * memory;
  EXPECT_NEAR(field.segment_source(0, 1, t), expected, 1e-5);
}

TEST(SpectralSolver, RejectsInvalidProblems) {
  auto p = base_problem(OrderSchedule::constant(0.5, 1.0));
  p.modes = 0;
  EXPECT_ANY_THROW((void)solve(p));
  auto q = base_problem(OrderSchedule::constant(0.5, 1.0));
  q.epsilons = {0.6};
  EXPECT_ANY_THROW((void)solve(q));
  auto r = base_problem(OrderSchedule::constant(0.5, 1.0));
  r.op = OperatorSpec::constant_coefficients(1.0, 1.0, -20.0);
  EXPECT_THROW((void)solve(r), CoercivityError);
}
