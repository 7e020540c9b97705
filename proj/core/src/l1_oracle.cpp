#include "fracstep/l1_oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "fracstep/errors.hpp"
#include "fracstep/special_functions.hpp"

namespace fracstep {

namespace {

void check_order(double order) {
  if (!(order > 0.0 && order < 1.0)) throw DomainError("L1 order must lie in (0, 1)");
}

// Depth table g_d = d^{1-beta} - (d-1)^{1-beta}, d = 1..steps, scaled by tau^{-beta}/Gamma(2-beta).
std::vector<double> depth_weights(double order, std::size_t steps, double tau) {
  const double scale = std::pow(tau, -order) * rgamma(2.0 - order);
  std::vector<double> g(steps + 1, 0.0);
  for (std::size_t d = 1; d <= steps; ++d) {
    const double dd = static_cast<double>(d);
    g[d] = scale * (std::pow(dd, 1.0 - order) - std::pow(dd - 1.0, 1.0 - order));
  }
  return g;
}

using DepthTables = std::map<double, std::vector<double>>;

DepthTables tables_for(const L1Grid& grid) {
  DepthTables tables;
  for (std::size_t m = 1; m <= grid.steps(); ++m) {
    const double b = grid.order(m);
    if (!tables.contains(b)) tables.emplace(b, depth_weights(b, grid.steps(), grid.step()));
  }
  return tables;
}

}  // namespace

L1Grid L1Grid::aligned(const OrderSchedule& schedule, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("L1 step must be positive");
  L1Grid grid;
  grid.tau_ = tau;
  grid.times_.push_back(0.0);
  grid.orders_.push_back(schedule.order(0));
  for (std::size_t j = 0; j < schedule.segment_count(); ++j) {
    const double ratio = schedule.width(j) / tau;
    const double cells = std::round(ratio);
    if (cells < 1.0 || std::abs(ratio - cells) > 1e-12 * std::max(1.0, ratio)) {
      throw DomainError("L1 step " + std::to_string(tau) + " does not divide segment " + std::to_string(j));
    }
    const auto n = static_cast<std::size_t>(cells);
    const double t0 = schedule.start(j);
    for (std::size_t k = 1; k <= n; ++k) {
      grid.times_.push_back(k == n ? schedule.end(j) : t0 + static_cast<double>(k) * tau);
      // beta(t_m) is right-continuous; the final node T keeps the last order.
      grid.orders_.push_back(k == n && j + 1 < schedule.segment_count() ? schedule.order(j + 1)
                                                                         : schedule.order(j));
    }
  }
  return grid;
}

std::vector<double> l1_weights(double order, std::size_t m, double tau) {
  check_order(order);
  if (m < 1) throw DomainError("l1_weights: m must be at least 1");
  if (!(tau > 0.0)) throw DomainError("l1_weights: tau must be positive");
  const auto g = depth_weights(order, m, tau);
  std::vector<double> b(m);
  for (std::size_t k = 0; k < m; ++k) b[k] = g[m - k];
  return b;
}

std::vector<double> solve_mode_l1(double lambda, const std::function<double(double)>& f,
                                  const OrderSchedule& schedule, double u0, const L1Grid& grid) {
  if (std::abs(grid.times().back() - schedule.horizon()) > 1e-12 * schedule.horizon()) {
    throw DomainError("L1 grid does not cover the schedule");
  }
  const auto tables = tables_for(grid);
  const auto times = grid.times();
  const std::size_t steps = grid.steps();
  std::vector<double> u(steps + 1, 0.0);
  std::vector<double> du(steps, 0.0);  // u_{k+1} - u_k
  u[0] = u0;
  for (std::size_t m = 1; m <= steps; ++m) {
    const auto& g = tables.at(grid.order(m));
    double memory = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) memory += g[m - k] * du[k];
    const double rhs = (f ? f(times[m]) : 0.0) + g[1] * u[m - 1] - memory;
    u[m] = rhs / (g[1] + lambda);
    if (!std::isfinite(u[m])) throw NumericError("non-finite L1 value at step " + std::to_string(m));
    du[m - 1] = u[m] - u[m - 1];
  }
  return u;
}

SpaceTimeArray solve_full_l1_fd(const ProblemSpec& spec, const L1Grid& grid, std::size_t spatial_points) {
  if (spatial_points < 16) throw DomainError("full L1 solve needs at least 16 spatial intervals");
  spec.op.validate();
  const double length = spec.op.length;
  const std::size_t interior = spatial_points - 1;
  const double h = length / static_cast<double>(spatial_points);

  SpaceTimeArray out;
  out.times.assign(grid.times().begin(), grid.times().end());
  out.x.resize(spatial_points + 1);
  for (std::size_t i = 0; i <= spatial_points; ++i) out.x[i] = static_cast<double>(i) * h;
  out.x.back() = length;
  const std::size_t steps = grid.steps();
  const std::size_t width = out.x.size();
  out.values.assign((steps + 1) * width, 0.0);

  // Symmetric tridiagonal A: diag (a_{i-1/2} + a_{i+1/2})/h^2 + c_i, off -a_{i+1/2}/h^2.
  std::vector<double> diag(interior), off(interior > 0 ? interior - 1 : 0);
  for (std::size_t i = 1; i <= interior; ++i) {
    const double x = out.x[i];
    const double am = spec.op.diffusivity(x - 0.5 * h);
    const double ap = spec.op.diffusivity(x + 0.5 * h);
    diag[i - 1] = (am + ap) / (h * h) + spec.op.reaction(x);
    if (i < interior) off[i - 1] = -ap / (h * h);
  }

  for (std::size_t i = 1; i <= interior; ++i) out.values[i] = spec.initial(out.x[i]);

  const auto tables = tables_for(grid);
  struct Factor {
    std::vector<double> d, e;
  };
  std::map<double, Factor> factors;
  for (const auto& [order, g] : tables) {
    Factor fac{diag, off};
    for (double& v : fac.d) v += g[1];
    const lapack_int info = LAPACKE_dpttrf(static_cast<lapack_int>(interior), fac.d.data(), fac.e.data());
    if (info != 0) throw NumericError("L1 system factorization failed (info " + std::to_string(info) + ")");
    factors.emplace(order, std::move(fac));
  }

  std::vector<double> rhs(interior), memory(interior);
  for (std::size_t m = 1; m <= steps; ++m) {
    const auto& g = tables.at(grid.order(m));
    const double t = out.times[m];
    std::fill(memory.begin(), memory.end(), 0.0);
    for (std::size_t k = 0; k + 1 < m; ++k) {
      const double w = g[m - k];
      const double* lo = &out.values[k * width];
      const double* hi = lo + width;
      for (std::size_t i = 1; i <= interior; ++i) memory[i - 1] += w * (hi[i] - lo[i]);
    }
    for (std::size_t i = 1; i <= interior; ++i) {
      const double f = spec.source.is_zero() ? 0.0 : spec.source(out.x[i], t);
      rhs[i - 1] = f + g[1] * out.values[(m - 1) * width + i] - memory[i - 1];
    }
    const auto& fac = factors.at(grid.order(m));
    const lapack_int info = LAPACKE_dpttrs(LAPACK_COL_MAJOR, static_cast<lapack_int>(interior), 1, fac.d.data(),
                                           fac.e.data(), rhs.data(), static_cast<lapack_int>(interior));
    if (info != 0) throw NumericError("L1 linear solve failed (info " + std::to_string(info) + ")");
    for (std::size_t i = 1; i <= interior; ++i) {
      if (!std::isfinite(rhs[i - 1])) throw NumericError("non-finite L1 value at step " + std::to_string(m));
      out.values[m * width + i] = rhs[i - 1];
    }
  }
  return out;
}

}  // namespace fracstep
