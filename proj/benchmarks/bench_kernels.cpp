#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracstep/l1_oracle.hpp"
#include "fracstep/singular_quadrature.hpp"
#include "fracstep/special_functions.hpp"
#include "fracstep/spectral_solver.hpp"

using namespace fracstep;

namespace {

void BM_MittagLeffler(benchmark::State& state, double alpha, double beta, double zmax) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-zmax, 0.0);
  std::vector<double> zs(256);
  for (double& z : zs) z = dist(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ml({alpha, beta}, zs[i++ & 255]));
  }
}
BENCHMARK_CAPTURE(BM_MittagLeffler, series_small_z, 0.5, 1.0, 1.0);
BENCHMARK_CAPTURE(BM_MittagLeffler, asymptotic_large_z, 0.9, 1.9, 100.0);
BENCHMARK_CAPTURE(BM_MittagLeffler, integral_low_order, 0.2, 0.2, 30.0);
BENCHMARK_CAPTURE(BM_MittagLeffler, unit_alpha, 1.0, 1.5, 50.0);

void BM_DuhamelConvolve(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  const GradedMesh mesh(0.0, 1.0, cells, 3.0);
  std::vector<double> f;
  for (double x : mesh.nodes()) f.push_back(std::cos(x));
  for (auto _ : state) benchmark::DoNotOptimize(duhamel_convolve(0.4, 9.87, mesh, f, 0.77));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DuhamelConvolve)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_HistoryIntegrate(benchmark::State& state) {
  const HistoryRule rule(0.0, 0.5, -0.7);
  std::vector<double> v;
  for (double s : rule.nodes()) v.push_back(std::pow(s, -0.7));
  for (auto _ : state) benchmark::DoNotOptimize(rule.integrate(v, 0.6, 0.8));
}
BENCHMARK(BM_HistoryIntegrate);

void BM_SolveTwoSegment(benchmark::State& state) {
  ProblemSpec p;
  p.schedule = OrderSchedule({0.0, 0.5, 1.0}, {0.3, 0.8});
  p.modes = static_cast<std::size_t>(state.range(0));
  p.initial = [](double x) { return x * (1.0 - x); };
  for (auto _ : state) benchmark::DoNotOptimize(solve(p));
}
BENCHMARK(BM_SolveTwoSegment)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_L1Mode(benchmark::State& state) {
  const OrderSchedule s({0.0, 0.5, 1.0}, {0.3, 0.8});
  const auto grid = L1Grid::aligned(s, std::ldexp(1.0, -static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_mode_l1(9.87, {}, s, 1.0, grid));
}
BENCHMARK(BM_L1Mode)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
