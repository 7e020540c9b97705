#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fracstep/problem.hpp"
#include "fracstep/spectral_solver.hpp"

namespace fracstep {

/// Data functional F_j = ||u_0||_D(L) + sum_{k<=j} (||f||_W11(I_k) + sup (t-t_k)^{b_k+e_k} ||f'(t)||).
///
/// Throws HypothesisViolation when the sampled ||f'|| blows up faster than (t-t_k)^{-b_k-e_k}.
[[nodiscard]] double data_functional(const ProblemSpec& spec, std::size_t j);

/// Pieces of the data functional on one segment.
struct SourceNorms {
  double l1 = 0.0;             ///< int ||f||
  double derivative_l1 = 0.0;  ///< int ||f'||
  double weighted_sup = 0.0;   ///< sup (t-t_k)^{b_k+e_k} ||f'||
  [[nodiscard]] double w11() const noexcept { return l1 + derivative_l1; }
};

/// Norms of the projected source on segment k, with the weight exponent b_k + e_k.
[[nodiscard]] SourceNorms source_norms(const ProblemSpec& spec, const EigenSystem& system, std::size_t k);

/// Probe times: every breakpoint, graded offsets on both sides of it, and a uniform fill.
[[nodiscard]] std::vector<double> default_probe_times(const OrderSchedule& schedule, std::size_t uniform = 200);

/// max over probes of the D(L) graph norm of u(t).
[[nodiscard]] double c0_dL_norm(const SolutionField& field, std::span<const double> probes);

/// int_0^T ||u'(t)|| dt, split at the breakpoints.
[[nodiscard]] double w11_norm(const SolutionField& field, std::size_t cells = 48, std::size_t points = 8);

/// Least-squares power-law fit of ||g(t_j + delta)|| against delta.
struct RateFit {
  std::optional<double> exponent;  ///< empty when g vanishes (no blow-up)
  std::vector<double> offsets;
  std::vector<double> values;
  double rms_residual = 0.0;
  bool trimmed = false;  ///< the two largest offsets were dropped
};

struct RateFitOptions {
  double min_offset = 1e-6;  ///< relative to the segment width
  double max_offset = 1e-2;
  std::size_t samples = 9;
  double trim_threshold = 0.05;
};

/// Exponent p_j of ||u'(t)|| ~ (t-t_j)^{p_j}.
[[nodiscard]] RateFit blowup_rate_fit(const SolutionField& field, std::size_t j, const RateFitOptions& options = {});

/// Exponent q_j of ||f_j'(t)|| ~ (t-t_j)^{q_j} for the assembled segment source.
[[nodiscard]] RateFit source_rate_fit(const SolutionField& field, std::size_t j, const RateFitOptions& options = {});

struct ResidualProbe {
  double x;
  double t;
};

/// Interior probe grid of nx * nt points avoiding breakpoints by `offset_floor` * min segment width.
[[nodiscard]] std::vector<ResidualProbe> default_residual_probes(const SolutionField& field, std::size_t nx = 10,
                                                                 std::size_t nt = 10, double offset_floor = 1e-3);

/// max |D^{beta(t)} u + L u - f| over the probes, with the Caputo derivative rebuilt from
/// mode derivatives on fresh high-resolution rules.
[[nodiscard]] double residual_check(const SolutionField& field, std::span<const ResidualProbe> probes,
                                    const HistoryRuleOptions& rule = {.points = 14, .middle_cells = 16,
                                                                      .right_layers = 14, .inner_tolerance = 1e-6});

struct InitialLimit {
  std::vector<double> times;
  std::vector<double> deviations;  ///< ||u(t) - u_0||
  double initial_norm = 0.0;       ///< ||u_0||
  [[nodiscard]] bool decreasing() const;
  /// Final deviation relative to ||u_0|| (0 when u_0 = 0).
  [[nodiscard]] double final_ratio() const;
};

/// ||u(t) - u_0|| at t in {1e-3, 1e-4, 1e-5, 1e-6} T.
[[nodiscard]] InitialLimit initial_limit_check(const SolutionField& field);

struct RegularityReport {
  std::vector<std::optional<double>> blowup_exponents;
  std::vector<std::optional<double>> source_exponents;
  double c0_dL = 0.0;
  double w11 = 0.0;
  std::vector<double> segment_source_sup;  ///< max over probes of ||f_j(t)||
  std::vector<double> data_functional;
  double residual_max = 0.0;
  std::vector<double> junction_gaps;
  InitialLimit initial_limit;
};

[[nodiscard]] RegularityReport regularity_report(const ProblemSpec& spec, const SolutionField& field);

}  // namespace fracstep
