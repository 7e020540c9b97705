#include "fracstep/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "fracstep/errors.hpp"
#include "fracstep/singular_quadrature.hpp"
#include "fracstep/special_functions.hpp"

namespace fracstep {

namespace {

double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> log_offsets(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = lo * std::pow(hi / lo, u);
  }
  return out;
}

struct LineFit {
  double slope = 0.0;
  double rms = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + fit.slope * (x[i] - mx));
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

template <class Norm>
RateFit power_fit(double start, double width, const RateFitOptions& options, Norm&& norm) {
  if (options.samples < 3 || !(options.min_offset > 0.0 && options.min_offset < options.max_offset)) {
    throw DomainError("rate fit needs at least three increasing positive offsets");
  }
  RateFit fit;
  fit.offsets = log_offsets(options.min_offset * width, options.max_offset * width, options.samples);
  fit.values.reserve(fit.offsets.size());
  for (double d : fit.offsets) fit.values.push_back(norm(start + d));
  const bool vanishing = std::any_of(fit.values.begin(), fit.values.end(),
                                     [](double v) { return !(v > std::numeric_limits<double>::min()); });
  if (vanishing) return fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < fit.offsets.size(); ++i) {
    lx.push_back(std::log(fit.offsets[i]));
    ly.push_back(std::log(fit.values[i]));
  }
  auto line = fit_line(lx, ly);
  if (line.rms > options.trim_threshold && lx.size() >= 5) {
    lx.resize(lx.size() - 2);
    ly.resize(ly.size() - 2);
    line = fit_line(lx, ly);
    fit.trimmed = true;
  }
  fit.exponent = line.slope;
  fit.rms_residual = line.rms;
  return fit;
}

}  // namespace

SourceNorms source_norms(const ProblemSpec& spec, const EigenSystem& system, std::size_t k) {
  const auto& sched = spec.schedule;
  const double eps = spec.regularity_exponents().at(k);
  const double weight = sched.order(k) + eps;
  SourceNorms out;
  if (spec.source.is_zero()) return out;
  const ProjectedSource proj(spec.source, system, sched.horizon());
  std::vector<double> buf(system.size());
  auto norm_f = [&](double t) {
    proj.values(t, buf);
    return l2(buf);
  };
  auto norm_df = [&](double t) {
    proj.derivatives(t, buf);
    return l2(buf);
  };
  const double a = sched.start(k);
  const double b = sched.end(k);
  const double w = b - a;

  // Growth of ||f'|| at the segment start decides whether the weighted sup is finite.
  RateFitOptions near{.min_offset = 1e-9, .max_offset = 1e-6, .samples = 4, .trim_threshold = 1.0};
  const auto growth = power_fit(a, w, near, norm_df);
  if (growth.exponent && *growth.exponent < -weight - 0.01) {
    std::ostringstream msg;
    msg << "source derivative on segment " << k << " grows like (t-t_k)^" << *growth.exponent
        << ", faster than the admissible (t-t_k)^-" << weight << " for eps_" << k << "=" << eps;
    throw HypothesisViolation(msg.str());
  }

  out.l1 = graded_time_quadrature(norm_f, a, b, 0.0);
  out.derivative_l1 = graded_time_quadrature(norm_df, a, b, -weight);
  for (double d : log_offsets(1e-10 * w, w, 241)) {
    out.weighted_sup = std::max(out.weighted_sup, std::pow(d, weight) * norm_df(std::min(a + d, b)));
  }
  return out;
}

double data_functional(const ProblemSpec& spec, std::size_t j) {
  spec.validate();
  if (j >= spec.schedule.segment_count()) throw DomainError("data_functional: segment out of range");
  const EigenSystem system = spec.build_eigensystem();
  double total = system.graph_norm(system.project(spec.initial));
  for (std::size_t k = 0; k <= j; ++k) {
    const auto n = source_norms(spec, system, k);
    total += n.w11() + n.weighted_sup;
  }
  return total;
}

std::vector<double> default_probe_times(const OrderSchedule& schedule, std::size_t uniform) {
  std::vector<double> t;
  const auto bp = schedule.breakpoints();
  const double horizon = schedule.horizon();
  for (std::size_t j = 0; j < bp.size(); ++j) {
    t.push_back(bp[j]);
    for (int e = 1; e <= 8; ++e) {
      const double d = std::pow(10.0, -e);
      if (j + 1 < bp.size()) t.push_back(bp[j] + d * schedule.width(j));
      if (j > 0) t.push_back(bp[j] - d * schedule.width(j - 1));
    }
  }
  for (std::size_t i = 0; i <= uniform; ++i) {
    t.push_back(horizon * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(uniform, 1)));
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

double c0_dL_norm(const SolutionField& field, std::span<const double> probes) {
  double best = 0.0;
  for (double t : probes) best = std::max(best, field.eigensystem().graph_norm(field.coefficients(t)));
  return best;
}

double w11_norm(const SolutionField& field, std::size_t cells, std::size_t points) {
  const auto& sched = field.schedule();
  double total = 0.0;
  std::vector<double> d(field.modes());
  for (std::size_t j = 0; j < sched.segment_count(); ++j) {
    auto norm = [&](double t) {
      for (std::size_t n = 0; n < d.size(); ++n) d[n] = field.segment(n, j).derivative(t);
      return l2(d);
    };
    total += graded_time_quadrature(norm, sched.start(j), sched.end(j), sched.order(j) - 1.0, cells, points);
  }
  return total;
}

RateFit blowup_rate_fit(const SolutionField& field, std::size_t j, const RateFitOptions& options) {
  const auto& sched = field.schedule();
  std::vector<double> d(field.modes());
  return power_fit(sched.start(j), sched.width(j), options, [&](double t) {
    for (std::size_t n = 0; n < d.size(); ++n) d[n] = field.segment(n, j).derivative(t);
    return l2(d);
  });
}

RateFit source_rate_fit(const SolutionField& field, std::size_t j, const RateFitOptions& options) {
  const auto& sched = field.schedule();
  std::vector<double> d(field.modes());
  return power_fit(sched.start(j), sched.width(j), options, [&](double t) {
    for (std::size_t n = 0; n < d.size(); ++n) d[n] = field.segment_source_derivative(n, j, t);
    return l2(d);
  });
}

std::vector<ResidualProbe> default_residual_probes(const SolutionField& field, std::size_t nx, std::size_t nt,
                                                   double offset_floor) {
  const auto& sched = field.schedule();
  double min_width = sched.width(0);
  for (std::size_t j = 1; j < sched.segment_count(); ++j) min_width = std::min(min_width, sched.width(j));
  const double gap = offset_floor * min_width;
  const double length = field.eigensystem().length();
  const double horizon = sched.horizon();
  std::vector<ResidualProbe> probes;
  for (std::size_t it = 0; it < nt; ++it) {
    double t = horizon * (static_cast<double>(it) + 0.5) / static_cast<double>(nt);
    for (double b : sched.breakpoints()) {
      if (std::abs(t - b) < gap) t = b + (t >= b ? gap : -gap);
    }
    t = std::clamp(t, gap, horizon - gap);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      probes.push_back({length * (static_cast<double>(ix) + 1.0) / static_cast<double>(nx + 1), t});
    }
  }
  return probes;
}

double residual_check(const SolutionField& field, std::span<const ResidualProbe> probes,
                      const HistoryRuleOptions& rule) {
  const auto& sched = field.schedule();
  const auto& sys = field.eigensystem();
  const std::size_t modes = field.modes();
  const std::size_t segments = sched.segment_count();

  std::vector<bool> active(modes, false);
  for (std::size_t n = 0; n < modes; ++n) {
    for (std::size_t j = 0; j < segments; ++j) active[n] = active[n] || !field.segment(n, j).is_zero();
  }
  const bool any_source = !field.projected_source().is_zero();

  // Completed segments: one rule each, derivative samples per mode.
  std::vector<std::unique_ptr<HistoryRule>> rules;
  std::vector<std::vector<std::vector<double>>> samples(segments);
  for (std::size_t k = 0; k + 1 < segments; ++k) {
    rules.push_back(std::make_unique<HistoryRule>(sched.start(k), sched.end(k), sched.order(k) - 1.0, rule));
    samples[k].resize(modes);
  }
  auto history_samples = [&](std::size_t n, std::size_t k) -> const std::vector<double>& {
    auto& v = samples[k][n];
    if (v.empty()) {
      for (double s : rules[k]->nodes()) v.push_back(field.segment(n, k).derivative(s));
    }
    return v;
  };

  std::vector<double> f(modes);
  double worst = 0.0;
  std::size_t i = 0;
  while (i < probes.size()) {
    const double t = probes[i].t;
    const std::size_t j = sched.segment_index(t);
    if (t == sched.start(j)) throw DomainError("residual probe placed on a breakpoint");
    const double beta = sched.order(j);
    field.projected_source().values(t, f);
    const HistoryRule current(sched.start(j), t, beta - 1.0, rule);
    std::vector<double> r(modes, 0.0);
    for (std::size_t n = 0; n < modes; ++n) {
      if (!active[n] && (!any_source || f[n] == 0.0)) continue;
      double memory = 0.0;
      for (std::size_t k = 0; k < j; ++k) {
        if (!field.segment(n, k).is_zero()) memory += rules[k]->integrate(history_samples(n, k), t, beta);
      }
      std::vector<double> v;
      v.reserve(current.nodes().size());
      for (double s : current.nodes()) v.push_back(field.segment(n, j).derivative(s));
      memory += current.integrate(v, t, beta);
      r[n] = rgamma(1.0 - beta) * memory + sys.eigenvalue(n) * field.segment(n, j).eval(t) - f[n];
    }
    // Consecutive probes at the same time share the modal residual.
    for (; i < probes.size() && probes[i].t == t; ++i) {
      double value = 0.0;
      for (std::size_t n = 0; n < modes; ++n) {
        if (r[n] != 0.0) value += r[n] * sys.eigenfunction(n, probes[i].x);
      }
      worst = std::max(worst, std::abs(value));
    }
  }
  return worst;
}

bool InitialLimit::decreasing() const {
  for (std::size_t i = 1; i < deviations.size(); ++i) {
    if (!(deviations[i] < deviations[i - 1])) return false;
  }
  return true;
}

double InitialLimit::final_ratio() const {
  if (deviations.empty() || initial_norm == 0.0) return 0.0;
  return deviations.back() / initial_norm;
}

InitialLimit initial_limit_check(const SolutionField& field) {
  InitialLimit out;
  const auto u0 = field.initial_coefficients();
  out.initial_norm = l2(u0);
  const double horizon = field.schedule().horizon();
  for (int e = 3; e <= 6; ++e) {
    const double t = std::pow(10.0, -e) * horizon;
    auto c = field.coefficients(t);
    for (std::size_t n = 0; n < c.size(); ++n) c[n] -= u0[n];
    out.times.push_back(t);
    out.deviations.push_back(l2(c));
  }
  return out;
}

RegularityReport regularity_report(const ProblemSpec& spec, const SolutionField& field) {
  RegularityReport rep;
  const auto& sched = field.schedule();
  const std::size_t segments = sched.segment_count();
  const auto probes = default_probe_times(sched);
  for (std::size_t j = 0; j < segments; ++j) {
    rep.blowup_exponents.push_back(blowup_rate_fit(field, j).exponent);
    rep.source_exponents.push_back(source_rate_fit(field, j).exponent);
    double sup = 0.0;
    std::vector<double> fj(field.modes());
    for (double t : probes) {
      if (t < sched.start(j) || t > sched.end(j)) continue;
      for (std::size_t n = 0; n < fj.size(); ++n) fj[n] = field.segment_source(n, j, t);
      sup = std::max(sup, l2(fj));
    }
    rep.segment_source_sup.push_back(sup);
    rep.data_functional.push_back(data_functional(spec, j));
    if (j > 0) rep.junction_gaps.push_back(field.junction_gap(j));
  }
  rep.c0_dL = c0_dL_norm(field, probes);
  rep.w11 = w11_norm(field);
  const auto residual_probes = default_residual_probes(field);
  rep.residual_max = residual_check(field, residual_probes);
  rep.initial_limit = initial_limit_check(field);
  return rep;
}

}  // namespace fracstep
