#include "fracstep/spectral_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "fracstep/errors.hpp"
#include "fracstep/special_functions.hpp"

namespace fracstep {

namespace {

void require_finite(std::span<const double> values, const char* what, std::size_t mode, std::size_t segment) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ModeError(std::string("non-finite ") + what, mode, segment);
  }
}

// Sum over finished segments k < j of (1/Gamma(1-beta)) int_{I_k} (t-s)^{-mu} v'_k(s) ds.
double memory_sum(std::span<const SegmentModeSolution> prior, double t, double mu) {
  double sum = 0.0;
  for (const auto& k : prior) {
    if (k.is_zero()) continue;
    sum += k.history().integrate(t, mu);
  }
  return sum;
}

}  // namespace

std::vector<double> SegmentSource::samples() const {
  std::vector<double> out(base_samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = base_samples[i] - (history_correction.empty() ? 0.0 : history_correction[i]);
  }
  return out;
}

SegmentSource assemble_segment_source(std::size_t mode, std::size_t j, const OrderSchedule& schedule,
                                      std::span<const SegmentModeSolution> prior, GradedMesh mesh,
                                      std::vector<double> base_samples) {
  if (prior.size() != j) throw DomainError("assemble_segment_source: expected one prior solution per earlier segment");
  if (base_samples.size() != mesh.nodes().size()) throw DomainError("assemble_segment_source: sample count mismatch");
  for (const auto& k : prior) {
    if (!k.is_zero() && !k.history().rule) throw DomainError("assemble_segment_source: prior segment lacks history");
  }
  SegmentSource src{mode, j, std::move(mesh), std::move(base_samples), {}, {}};
  src.history_correction.assign(src.base_samples.size(), 0.0);
  if (j == 0) return src;
  const double beta = schedule.order(j);
  const double scale = rgamma(1.0 - beta);
  const auto nodes = src.mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    src.history_correction[i] = scale * memory_sum(prior, nodes[i], beta);
  }
  require_finite(src.history_correction, "history correction", mode, j);
  return src;
}

SegmentModeSolution::SegmentModeSolution(SegmentSource source, double lambda, double order, double initial_value)
    : source_(std::move(source)), lambda_(lambda), order_(order), initial_(initial_value) {
  samples_ = source_.samples();
  require_finite(samples_, "segment source", source_.mode, source_.segment);
  if (!std::isfinite(initial_)) throw ModeError("non-finite junction value", source_.mode, source_.segment);
  source_free_ = std::all_of(samples_.begin(), samples_.end(), [](double v) { return v == 0.0; });
  zero_ = source_free_ && initial_ == 0.0;
  singular_coeff_ = samples_.front() - lambda_ * initial_;
  end_value_ = eval(end());
  if (!std::isfinite(end_value_)) throw ModeError("non-finite end value", source_.mode, source_.segment);
}

void SegmentModeSolution::check_time(double t, bool open_left) const {
  const bool below = open_left ? t <= start() : t < start();
  if (!(t <= end()) || below) {
    throw DomainError("time " + std::to_string(t) + " outside segment " + std::to_string(segment()));
  }
}

double SegmentModeSolution::eval(double t) const {
  check_time(t, false);
  if (zero_) return 0.0;
  if (t == start()) return initial_;
  const double tau = t - start();
  double value = initial_ == 0.0 ? 0.0 : initial_ * relaxation(order_, lambda_, tau);
  if (!source_free_) value += duhamel_convolve(order_, lambda_, source_.mesh, samples_, t);
  return value;
}

double SegmentModeSolution::derivative(double t) const {
  check_time(t, true);
  if (zero_) return 0.0;
  const double tau = t - start();
  double value = singular_coeff_ == 0.0 ? 0.0 : singular_coeff_ * duhamel_kernel(order_, lambda_, tau);
  if (!source_free_) {
    const auto w = duhamel_slope_weights(order_, lambda_, source_.mesh, t);
    for (std::size_t i = 0; i < w.size(); ++i) value += w[i] * samples_[i];
  }
  return value;
}

SolutionField solve(const ProblemSpec& spec, const SolverOptions& options) {
  spec.validate();
  SolutionField field;
  auto ctx = std::make_shared<SolutionField::Context>(spec, spec.build_eigensystem());
  field.ctx_ = ctx;
  const auto& sys = ctx->system;
  const auto& schedule = ctx->schedule;
  const std::size_t modes = sys.size();
  const std::size_t segments = schedule.segment_count();

  field.u0_ = sys.project(spec.initial);
  require_finite(field.u0_, "initial projection", 0, 0);

  // Meshes, projected base samples and history rules depend only on the segment.
  std::vector<GradedMesh> meshes;
  std::vector<std::vector<std::vector<double>>> base(segments);  // [segment][mode][node]
  std::vector<std::shared_ptr<const HistoryRule>> rules(segments);
  std::vector<double> buffer(modes);
  for (std::size_t j = 0; j < segments; ++j) {
    const double beta = schedule.order(j);
    meshes.emplace_back(schedule.start(j), schedule.end(j), spec.quad.cells, spec.quad.grading,
                        SingularEnd::left);
    const auto nodes = meshes.back().nodes();
    base[j].assign(modes, std::vector<double>(nodes.size(), 0.0));
    if (!ctx->projected.is_zero()) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        ctx->projected.values(nodes[i], buffer);
        for (std::size_t n = 0; n < modes; ++n) base[j][n][i] = buffer[n];
      }
    }
    if (j + 1 < segments || options.keep_last_history) {
      rules[j] = std::make_shared<HistoryRule>(schedule.start(j), schedule.end(j), beta - 1.0, spec.quad.history);
    }
  }

  field.table_.resize(modes);
  auto solve_mode = [&](std::size_t n) {
    auto& row = field.table_[n];
    row.reserve(segments);
    const double lambda = sys.eigenvalue(n);
    double junction = field.u0_[n];
    for (std::size_t j = 0; j < segments; ++j) {
      auto src = assemble_segment_source(n, j, schedule, std::span<const SegmentModeSolution>(row), meshes[j],
                                         base[j][n]);
      SegmentModeSolution sol(std::move(src), lambda, schedule.order(j), junction);
      if (rules[j]) {
        DerivativeHistory hist{rules[j], std::vector<double>(rules[j]->nodes().size(), 0.0)};
        if (!sol.is_zero()) {
          const auto nodes = rules[j]->nodes();
          for (std::size_t i = 0; i < nodes.size(); ++i) hist.values[i] = sol.derivative(nodes[i]);
          require_finite(hist.values, "segment derivative", n, j);
        }
        sol.set_history(std::move(hist));
      }
      junction = sol.end_value();
      row.push_back(std::move(sol));
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(modes)));
  if (threads == 1) {
    for (std::size_t n = 0; n < modes; ++n) solve_mode(n);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t n = next++; n < modes; n = next++) {
          try {
            solve_mode(n);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = modes;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  return field;
}

double SolutionField::mode_value(std::size_t mode, double t) const {
  const std::size_t j = schedule().closed_segment_index(t);
  return segment(mode, j).eval(t);
}

double SolutionField::mode_derivative(std::size_t mode, double t) const {
  const std::size_t j = schedule().closed_segment_index(t);
  if (t == schedule().start(j)) throw DomainError("derivative requested at a breakpoint");
  return segment(mode, j).derivative(t);
}

std::vector<double> SolutionField::mode_trajectory(std::size_t mode, std::span<const double> times) const {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(mode_value(mode, t));
  return out;
}

std::vector<double> SolutionField::coefficients(double t) const {
  std::vector<double> out(modes());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = mode_value(n, t);
  return out;
}

std::vector<double> SolutionField::derivative_coefficients(double t) const {
  std::vector<double> out(modes());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = mode_derivative(n, t);
  return out;
}

double SolutionField::evaluate(double x, double t) const {
  const double length = eigensystem().length();
  if (!(x >= 0.0 && x <= length)) throw DomainError("evaluate: x outside [0, L]");
  if (x == 0.0 || x == length) return 0.0;
  double sum = 0.0;
  for (std::size_t n = 0; n < modes(); ++n) {
    const double c = mode_value(n, t);
    if (c != 0.0) sum += c * eigensystem().eigenfunction(n, x);
  }
  return sum;
}

double SolutionField::segment_source(std::size_t mode, std::size_t j, double t) const {
  const auto& sched = schedule();
  if (!(t >= sched.start(j) && t <= sched.end(j))) throw DomainError("segment_source: t outside segment");
  std::vector<double> f(modes());
  projected_source().values(t, f);
  if (j == 0) return f[mode];
  const double beta = sched.order(j);
  const auto& row = table_.at(mode);
  return f[mode] - rgamma(1.0 - beta) * memory_sum(std::span(row).first(j), t, beta);
}

double SolutionField::segment_source_derivative(std::size_t mode, std::size_t j, double t) const {
  const auto& sched = schedule();
  if (!(t > sched.start(j) && t <= sched.end(j))) throw DomainError("segment_source_derivative: t outside segment");
  std::vector<double> df(modes());
  projected_source().derivatives(t, df);
  if (j == 0) return df[mode];
  const double beta = sched.order(j);
  const auto& row = table_.at(mode);
  return df[mode] + beta * rgamma(1.0 - beta) * memory_sum(std::span(row).first(j), t, 1.0 + beta);
}

double SolutionField::junction_gap(std::size_t j) const {
  if (j == 0 || j >= schedule().segment_count()) throw DomainError("junction_gap: j must lie in 1..M-1");
  const double tj = schedule().start(j);
  double gap = 0.0;
  for (const auto& row : table_) gap = std::max(gap, std::abs(row[j - 1].eval(tj) - row[j].eval(tj)));
  return gap;
}

double SolutionField::tail_indicator() const {
  if (u0_.empty()) return 0.0;
  const double lam = eigensystem().eigenvalue(u0_.size() - 1);
  return lam * lam * u0_.back() * u0_.back();
}

}  // namespace fracstep
