#include "fracstep_app/commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>

#include "fracstep/errors.hpp"
#include "fracstep/l1_oracle.hpp"
#include "fracstep/special_functions.hpp"
#include "fracstep/spectral_solver.hpp"
#include "fracstep/verification.hpp"

#ifndef FRACSTEP_VERSION
#define FRACSTEP_VERSION "unknown"
#endif

namespace fracstep::app {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json meta(const std::string& command, const RunConfig& cfg, const RunOptions& options) {
  return json{{"command", command},
              {"version", FRACSTEP_VERSION},
              {"config", cfg.source},
              {"threads", options.effective_threads()},
              {"deterministic", options.deterministic}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> x_samples(const RunConfig& cfg) {
  const double length = cfg.problem.op.length;
  std::vector<double> x(cfg.x_points);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = i + 1 == x.size() ? length : length * static_cast<double>(i) / static_cast<double>(x.size() - 1);
  }
  return x;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Modal L1 trajectories, one vector per mode, on the grid's nodes.
std::vector<std::vector<double>> l1_modes(const ProblemSpec& spec, const EigenSystem& sys, const L1Grid& grid) {
  const ProjectedSource proj(spec.source, sys, spec.schedule.horizon());
  const auto u0 = sys.project(spec.initial);
  std::vector<std::vector<double>> out;
  std::vector<double> buf(sys.size());
  for (std::size_t n = 0; n < sys.size(); ++n) {
    std::function<double(double)> f;
    if (!proj.is_zero()) {
      f = [&proj, &buf, n](double t) {
        proj.values(t, buf);
        return buf[n];
      };
    }
    out.push_back(solve_mode_l1(sys.eigenvalue(n), f, spec.schedule, u0[n], grid));
  }
  return out;
}

}  // namespace

json error_document(const std::string& kind, const std::string& message, const std::string& path) {
  json doc{{"status", "error"}, {"kind", kind}, {"message", message}};
  if (!path.empty()) doc["path"] = path;
  return doc;
}

Artifacts run_solve(const RunConfig& cfg, const RunOptions& options) {
  const auto start = Clock::now();
  const SolutionField field = solve(cfg.problem, {.threads = options.effective_threads()});
  const double solve_seconds = seconds_since(start);
  spdlog::info("solved {} modes on {} segments in {:.3f} s", field.modes(), field.schedule().segment_count(),
               solve_seconds);

  CsvTable modes({"t", "n", "u_n"});
  CsvTable solution({"x", "t", "u"});
  const auto xs = x_samples(cfg);
  const double length = cfg.problem.op.length;
  for (double t : cfg.times) {
    const auto c = field.coefficients(t);
    for (std::size_t n = 0; n < c.size(); ++n) modes.row({t, static_cast<double>(n + 1), c[n]});
    const auto u = field.eigensystem().synthesize(c, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      solution.row({xs[i], t, (xs[i] == 0.0 || xs[i] == length) ? 0.0 : u[i]});
    }
  }
  json m = meta("solve", cfg, options);
  json gaps = json::array();
  for (std::size_t j = 1; j < field.schedule().segment_count(); ++j) gaps.push_back(field.junction_gap(j));
  m["junction_gaps"] = gaps;
  m["tail_indicator"] = field.tail_indicator();
  m["timings"] = {{"solve_seconds", solve_seconds}, {"total_seconds", seconds_since(start)}};
  return {{"modes.csv", modes.str()}, {"solution.csv", solution.str()}, {"meta.json", dump(m)}};
}

Artifacts run_oracle(const RunConfig& cfg, const RunOptions& options) {
  const auto start = Clock::now();
  const auto& spec = cfg.problem;
  const L1Grid grid = L1Grid::aligned(spec.schedule, cfg.oracle.tau);
  json m = meta("oracle", cfg, options);
  Artifacts out;
  if (cfg.oracle.full) {
    const auto arr = solve_full_l1_fd(spec, grid, cfg.oracle.spatial_points);
    CsvTable table({"x", "t", "u"});
    for (double t : cfg.times) {
      const auto m_idx = static_cast<std::size_t>(std::llround(t / grid.step()));
      const std::size_t row = std::min(m_idx, grid.steps());
      const auto slice = arr.slice(row);
      for (std::size_t i = 0; i < arr.x.size(); ++i) table.row({arr.x[i], arr.times[row], slice[i]});
    }
    out["oracle_solution.csv"] = table.str();
  } else {
    const EigenSystem sys = spec.build_eigensystem();
    const auto traj = l1_modes(spec, sys, grid);
    CsvTable table({"t", "n", "u_n"});
    for (std::size_t m_idx = 0; m_idx <= grid.steps(); ++m_idx) {
      for (std::size_t n = 0; n < traj.size(); ++n) {
        table.row({grid.times()[m_idx], static_cast<double>(n + 1), traj[n][m_idx]});
      }
    }
    out["oracle_modes.csv"] = table.str();
  }
  m["tau"] = grid.step();
  m["steps"] = grid.steps();
  m["timings"] = {{"total_seconds", seconds_since(start)}};
  out["meta.json"] = dump(m);
  return out;
}

Artifacts run_compare(const RunConfig& cfg, const RunOptions& options) {
  const auto start = Clock::now();
  const auto& spec = cfg.problem;
  auto exponents = cfg.compare.tau_exponents;
  if (exponents.empty()) throw ConfigError("/run/compare/tau_exponents", "at least one step is required");
  std::sort(exponents.begin(), exponents.end());
  exponents.erase(std::unique(exponents.begin(), exponents.end()), exponents.end());

  const SolutionField field = solve(spec, {.threads = options.effective_threads()});
  // Discrepancies are measured on the coarsest grid, whose nodes every finer grid contains.
  std::vector<L1Grid> grids;
  for (int e : exponents) {
    try {
      grids.push_back(L1Grid::aligned(spec.schedule, std::ldexp(1.0, -e)));
    } catch (const DomainError& err) {
      throw ConfigError("/run/compare/tau_exponents", std::string("mismatched grid: ") + err.what());
    }
  }
  const auto common = grids.front().times();
  std::vector<std::vector<double>> spectral(field.modes());
  for (std::size_t n = 0; n < field.modes(); ++n) spectral[n] = field.mode_trajectory(n, common);

  const EigenSystem& sys = field.eigensystem();
  CsvTable table({"tau_exponent", "tau", "max_discrepancy", "l2_discrepancy"});
  json rows = json::array();
  double previous = HUGE_VAL;
  bool monotone = true;
  for (std::size_t g = 0; g < grids.size(); ++g) {
    const auto traj = l1_modes(spec, sys, grids[g]);
    const std::size_t stride = std::size_t{1} << (exponents[g] - exponents.front());
    double worst = 0.0;
    double sumsq = 0.0;
    for (std::size_t k = 0; k < common.size(); ++k) {
      double local = 0.0;
      for (std::size_t n = 0; n < traj.size(); ++n) {
        const double d = traj[n][k * stride] - spectral[n][k];
        worst = std::max(worst, std::abs(d));
        local += d * d;
      }
      const double w = (k == 0 || k + 1 == common.size()) ? 0.5 : 1.0;
      sumsq += w * local * grids.front().step();
    }
    const double l2 = std::sqrt(sumsq);
    table.row({static_cast<double>(exponents[g]), grids[g].step(), worst, l2});
    rows.push_back({{"tau_exponent", exponents[g]}, {"max_discrepancy", worst}, {"l2_discrepancy", l2}});
    monotone = monotone && worst < previous;
    previous = worst;
    spdlog::info("tau = 2^-{}: max discrepancy {:.3e}", exponents[g], worst);
  }
  json m = meta("compare", cfg, options);
  m["comparison"] = {{"rows", rows}, {"max_discrepancy_decreasing", monotone}, {"sample_times", common.size()}};
  m["timings"] = {{"total_seconds", seconds_since(start)}};
  return {{"compare.csv", table.str()}, {"meta.json", dump(m)}};
}

Artifacts run_verify(const RunConfig& cfg, const RunOptions& options) {
  const auto start = Clock::now();
  const auto& spec = cfg.problem;
  const SolutionField field = solve(spec, {.threads = options.effective_threads()});
  const RegularityReport rep = regularity_report(spec, field);

  CsvTable fits({"segment", "kind", "offset", "value"});
  for (std::size_t j = 0; j < field.schedule().segment_count(); ++j) {
    for (const auto& [kind, fit] : {std::pair{0.0, blowup_rate_fit(field, j)}, std::pair{1.0, source_rate_fit(field, j)}}) {
      for (std::size_t i = 0; i < fit.offsets.size(); ++i) {
        fits.row({static_cast<double>(j), kind, fit.offsets[i], fit.values[i]});
      }
    }
  }

  json report;
  json p = json::array(), q = json::array();
  for (const auto& v : rep.blowup_exponents) p.push_back(optional_number(v));
  for (const auto& v : rep.source_exponents) q.push_back(optional_number(v));
  report["blowup_exponents"] = p;
  report["source_exponents"] = q;
  report["c0_dL_norm"] = rep.c0_dL;
  report["w11_norm"] = rep.w11;
  report["segment_source_sup"] = rep.segment_source_sup;
  report["data_functional"] = rep.data_functional;
  report["residual_max"] = rep.residual_max;
  report["junction_gaps"] = rep.junction_gaps;
  report["initial_limit"] = {{"times", rep.initial_limit.times},
                             {"deviations", rep.initial_limit.deviations},
                             {"initial_norm", rep.initial_limit.initial_norm},
                             {"decreasing", rep.initial_limit.decreasing()},
                             {"final_ratio", rep.initial_limit.final_ratio()}};
  json m = meta("verify", cfg, options);
  m["timings"] = {{"total_seconds", seconds_since(start)}};
  return {{"report.json", dump(report)}, {"rate_fits.csv", fits.str()}, {"meta.json", dump(m)}};
}

Artifacts run_ml_eval(const RunConfig& cfg, const RunOptions& options) {
  if (cfg.ml_points.empty()) throw ConfigError("/run/ml/points", "no evaluation points given");
  CsvTable table({"alpha", "beta", "z", "value", "regime"});
  for (std::size_t i = 0; i < cfg.ml_points.size(); ++i) {
    const auto& pt = cfg.ml_points[i];
    MLEvaluation ev{};
    try {
      ev = ml_detailed({pt.alpha, pt.beta}, pt.z);
    } catch (const DomainError& e) {
      throw ConfigError("/run/ml/points/" + std::to_string(i), e.what());
    }
    const std::vector<std::string> cells{format_number(pt.alpha), format_number(pt.beta), format_number(pt.z),
                                         format_number(ev.value), to_string(ev.regime)};
    table.text_row(cells);
  }
  return {{"ml.csv", table.str()}, {"meta.json", dump(meta("ml-eval", cfg, options))}};
}

int dispatch(const std::string& command, const std::string& config_path, const std::string& out_dir,
             const RunOptions& options, const OracleOverrides& overrides) {
  auto fail = [](const std::string& kind, const std::string& message, const std::string& path, int code) {
    spdlog::error("{}", message);
    std::cout << error_document(kind, message, path).dump() << std::endl;
    return code;
  };
  try {
    RunConfig cfg = load_config(config_path);
    if (overrides.tau) cfg.oracle.tau = *overrides.tau;
    if (overrides.full) cfg.oracle.full = *overrides.full;
    if (overrides.spatial_points) cfg.oracle.spatial_points = *overrides.spatial_points;
    Artifacts artifacts;
    if (command == "solve") {
      artifacts = run_solve(cfg, options);
    } else if (command == "oracle") {
      artifacts = run_oracle(cfg, options);
    } else if (command == "compare") {
      artifacts = run_compare(cfg, options);
    } else if (command == "verify") {
      artifacts = run_verify(cfg, options);
    } else if (command == "ml-eval") {
      artifacts = run_ml_eval(cfg, options);
    } else {
      return fail("usage", "unknown command " + command, "", kUsage);
    }
    commit_artifacts(out_dir, artifacts);
    return kOk;
  } catch (const ConfigError& e) {
    return fail("config", e.what(), e.path(), kConfig);
  } catch (const NumericError& e) {
    return fail("numeric", e.what(), "", kNumeric);
  } catch (const AccuracyError& e) {
    return fail("numeric", e.what(), "", kNumeric);
  } catch (const Error& e) {
    // Domain, schedule, coercivity and hypothesis failures stem from the input.
    return fail("config", e.what(), "", kConfig);
  } catch (const std::exception& e) {
    return fail("numeric", e.what(), "", kNumeric);
  }
}

}  // namespace fracstep::app
