#include "fracstep/singular_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracstep/errors.hpp"
#include "fracstep/special_functions.hpp"

namespace fracstep {

namespace {

// Cells narrower than this fraction of their distance to t use Gauss-Legendre
// on the kernel instead of differences of its primitives.
constexpr double kTinyCellRatio = 1e-2;
constexpr std::size_t kTinyCellPoints = 3;
// A history cell counts as near when t - hi < kNearRatio * width.
constexpr double kNearRatio = 2.0;
constexpr std::size_t kNearPoints = 12;

void check_interval(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    std::ostringstream msg;
    msg << "invalid interval (" << a << ", " << b << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

GradedMesh::GradedMesh(double a, double b, std::size_t n_cells, double grading, SingularEnd singular_end)
    : grading_(grading), end_(singular_end) {
  check_interval(a, b);
  if (n_cells == 0) throw DomainError("graded mesh needs at least one cell");
  if (!(grading >= 1.0) || !std::isfinite(grading)) throw DomainError("mesh grading exponent must be >= 1");
  const double r = grading;
  nodes_.resize(n_cells + 1);
  const auto n = static_cast<double>(n_cells);
  switch (singular_end) {
    case SingularEnd::left:
      for (std::size_t i = 0; i <= n_cells; ++i) nodes_[i] = a + (b - a) * std::pow(i / n, r);
      break;
    case SingularEnd::right:
      for (std::size_t i = 0; i <= n_cells; ++i) nodes_[i] = b - (b - a) * std::pow((n_cells - i) / n, r);
      break;
    case SingularEnd::both: {
      if (n_cells < 2) throw DomainError("two-sided grading needs at least two cells");
      const std::size_t nl = (n_cells + 1) / 2;
      const std::size_t nr = n_cells - nl;
      const double mid = 0.5 * (a + b);
      for (std::size_t i = 0; i <= nl; ++i) {
        nodes_[i] = a + (mid - a) * std::pow(static_cast<double>(i) / nl, r);
      }
      for (std::size_t i = 1; i <= nr; ++i) {
        nodes_[nl + i] = b - (b - mid) * std::pow(static_cast<double>(nr - i) / nr, r);
      }
      break;
    }
  }
  nodes_.front() = a;
  nodes_.back() = b;
  for (std::size_t i = 0; i < n_cells; ++i) {
    if (!(nodes_[i] < nodes_[i + 1])) throw DomainError("graded mesh collapsed; reduce grading or cell count");
  }
}

double jacobi_weighted_integral(const SingularIntegrand& f, std::size_t nodes) {
  check_interval(f.a, f.b);
  if (!(f.p > -1.0) || !(f.q > -1.0)) {
    std::ostringstream msg;
    msg << "endpoint exponents must exceed -1, got p=" << f.p << ", q=" << f.q;
    throw DomainError(msg.str());
  }
  const auto rule = gauss_jacobi(nodes, f.q, f.p);
  const double half = 0.5 * (f.b - f.a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
    sum += rule->weights[i] * f.smooth_part(f.a + half * (1.0 + rule->nodes[i]));
  }
  return sum * std::pow(half, f.p + f.q + 1.0);
}

double graded_time_quadrature(const std::function<double(double)>& g, double a, double b, double p,
                              std::size_t n_cells, std::size_t points) {
  check_interval(a, b);
  if (!(p > -1.0)) throw DomainError("left endpoint exponent must exceed -1");
  double r = std::max(1.0, 2.0 / (1.0 + p));
  // Keep the first node resolvable relative to a.
  const double floor_width = 1e-10 * std::abs(a);
  if (floor_width > 0.0 && (b - a) * std::pow(static_cast<double>(n_cells), -r) < floor_width) {
    r = std::max(1.0, std::log((b - a) / floor_width) / std::log(static_cast<double>(n_cells)));
  }
  const GradedMesh mesh(a, b, n_cells, r, SingularEnd::left);
  const auto gl = gauss_legendre(points);
  auto panel = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double cell = 0.0;
    for (std::size_t q = 0; q < gl->nodes.size(); ++q) cell += gl->weights[q] * g(mid + half * gl->nodes[q]);
    return half * cell;
  };
  double sum = 0.0;
  // The first cell is halved toward a until the remaining piece holds a 1e-3 share of its mass;
  // that piece carries the declared power through a Jacobi weight.
  {
    const double width = mesh.node(1) - a;
    double layers = std::ceil(std::log(1e-3) / ((1.0 + p) * std::log(0.5)));
    if (a != 0.0) layers = std::min(layers, std::floor(std::log2(width / floor_width)));
    const int k = static_cast<int>(std::clamp(layers, 0.0, 60.0));
    double hi = mesh.node(1);
    for (int i = 0; i < k; ++i) {
      const double lo = a + 0.5 * (hi - a);
      sum += panel(lo, hi);
      hi = lo;
    }
    sum += jacobi_weighted_integral({[&](double s) { return g(s) * std::pow(s - a, -p); }, a, hi, p, 0.0}, points);
  }
  for (std::size_t c = 1; c < mesh.cell_count(); ++c) {
    const double lo = mesh.node(c);
    const double hi = mesh.node(c + 1);
    // Cells spanning a wide range of distances to a are split geometrically (ratio <= 2).
    const double ratio = (hi - a) / (lo - a);
    const auto pieces = static_cast<std::size_t>(std::ceil(std::log2(std::max(ratio, 1.0)) - 1e-12));
    if (pieces <= 1) {
      sum += panel(lo, hi);
      continue;
    }
    const double step = std::pow(ratio, 1.0 / static_cast<double>(pieces));
    double left = lo;
    for (std::size_t k = 1; k <= pieces; ++k) {
      const double right = k == pieces ? hi : a + (lo - a) * std::pow(step, static_cast<double>(k));
      sum += panel(left, right);
      left = right;
    }
  }
  return sum;
}

namespace {

void check_target(const GradedMesh& mesh, double t) {
  if (!(t >= mesh.a() && t <= mesh.b())) {
    std::ostringstream msg;
    msg << "evaluation time " << t << " outside mesh [" << mesh.a() << ", " << mesh.b() << "]";
    throw DomainError(msg.str());
  }
}

// Visits the cells left of t; primitives at node distances are computed at most once.
template <class Visit>
void for_each_cell(double alpha, double lambda, const GradedMesh& mesh, double t, bool second, Visit&& visit) {
  const auto nodes = mesh.nodes();
  std::vector<double> k1(nodes.size(), std::nan(""));
  std::vector<double> k2(nodes.size(), std::nan(""));
  auto prim = [&](std::size_t i, double d, bool want_second) {
    if (std::isnan(k1[i])) {
      k1[i] = kernel_primitive(alpha, lambda, d);
      if (second) k2[i] = kernel_second_primitive(alpha, lambda, d);
    }
    return want_second ? k2[i] : k1[i];
  };
  for (std::size_t m = 0; m + 1 < nodes.size() && nodes[m] < t; ++m) {
    const double lo = nodes[m];
    const double hi = nodes[m + 1];
    const double upper = std::min(hi, t);
    const double d0 = t - lo;
    const double d1 = t - upper;
    const bool tiny = (upper - lo) < kTinyCellRatio * d1;
    if (tiny) {
      visit(m, lo, hi, upper, true, d0, d1, 0.0, 0.0, 0.0, 0.0);
      continue;
    }
    // A partial cell ends at t itself, where both primitives vanish.
    const double k1_1 = hi <= t ? prim(m + 1, d1, false) : 0.0;
    const double k2_1 = hi <= t ? prim(m + 1, d1, true) : 0.0;
    visit(m, lo, hi, upper, false, d0, d1, prim(m, d0, false), k1_1, prim(m, d0, true), k2_1);
  }
}

}  // namespace

std::vector<double> duhamel_weights(double alpha, double lambda, const GradedMesh& mesh, double t) {
  check_target(mesh, t);
  std::vector<double> w(mesh.nodes().size(), 0.0);
  const auto gl = gauss_legendre(kTinyCellPoints);
  for_each_cell(alpha, lambda, mesh, t, true, [&](std::size_t m, double lo, double hi, double upper, bool tiny, double d0, double d1,
                          double k1_0, double k1_1, double k2_0, double k2_1) {
    const double h = hi - lo;
    if (tiny) {
      const double half = 0.5 * (upper - lo);
      const double mid = 0.5 * (upper + lo);
      for (std::size_t q = 0; q < gl->nodes.size(); ++q) {
        const double s = mid + half * gl->nodes[q];
        const double k = half * gl->weights[q] * duhamel_kernel(alpha, lambda, t - s);
        const double frac = (s - lo) / h;
        w[m] += k * (1.0 - frac);
        w[m + 1] += k * frac;
      }
      return;
    }
    const double i0 = k1_0 - k1_1;
    const double i1 = k2_0 - k2_1 - (d0 - d1) * k1_1;
    w[m] += i0 - i1 / h;
    w[m + 1] += i1 / h;
  });
  return w;
}

double duhamel_convolve(double alpha, double lambda, const GradedMesh& mesh, std::span<const double> samples,
                        double t) {
  if (samples.size() != mesh.nodes().size()) throw DomainError("source samples do not match the mesh");
  const std::vector<double> w = duhamel_weights(alpha, lambda, mesh, t);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != 0.0) sum += w[i] * samples[i];
  }
  return sum;
}

std::vector<double> duhamel_slope_weights(double alpha, double lambda, const GradedMesh& mesh, double t) {
  check_target(mesh, t);
  std::vector<double> c(mesh.nodes().size(), 0.0);
  const auto gl = gauss_legendre(kTinyCellPoints);
  for_each_cell(alpha, lambda, mesh, t, false, [&](std::size_t m, double lo, double hi, double upper, bool tiny, double, double,
                          double k1_0, double k1_1, double, double) {
    double j;
    if (tiny) {
      const double half = 0.5 * (upper - lo);
      const double mid = 0.5 * (upper + lo);
      j = 0.0;
      for (std::size_t q = 0; q < gl->nodes.size(); ++q) {
        j += half * gl->weights[q] * duhamel_kernel(alpha, lambda, t - (mid + half * gl->nodes[q]));
      }
    } else {
      j = k1_0 - k1_1;
    }
    const double h = hi - lo;
    c[m] -= j / h;
    c[m + 1] += j / h;
  });
  return c;
}

HistoryRule::HistoryRule(double a, double b, double left_exponent, const HistoryRuleOptions& options)
    : a_(a), b_(b), p_(left_exponent) {
  check_interval(a, b);
  if (!(left_exponent > -1.0)) throw DomainError("left endpoint exponent must exceed -1");
  if (options.points < 2 || options.jacobi_points < 1) throw DomainError("history rule needs at least 2 points");
  const double sigma = options.layer_ratio;
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("layer ratio must lie in (0,1)");

  legendre_ = gauss_legendre(options.points);
  const double width = b - a;
  const double edge = 0.25 * width;
  const double decay = (1.0 + p_) * std::log(sigma);
  // Layers stop where a + inner would lose relative precision against a.
  double max_layers = 80.0;
  if (a != 0.0) max_layers = std::floor(std::log(1e-9 * std::abs(a) / edge) / std::log(sigma));
  const auto left_layers = static_cast<std::size_t>(
      std::clamp(std::ceil(std::log(options.inner_tolerance) / decay), 2.0, std::max(2.0, max_layers)));

  auto add_cell = [&](double lo, double hi, bool jacobi) {
    cells_.push_back({lo, hi, nodes_.size(), jacobi});
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    if (jacobi) {
      for (std::size_t q = 0; q < jacobi_->nodes.size(); ++q) {
        const double s = lo + half * (1.0 + jacobi_->nodes[q]);
        nodes_.push_back(s);
        // Stored weights multiply v(s) directly, so divide the Jacobi weight's power back out.
        weights_.push_back(jacobi_->weights[q] * std::pow(half, p_ + 1.0) * std::pow(s - a, -p_));
      }
    } else {
      for (std::size_t q = 0; q < legendre_->nodes.size(); ++q) {
        nodes_.push_back(mid + half * legendre_->nodes[q]);
        weights_.push_back(half * legendre_->weights[q]);
      }
    }
  };

  const bool singular_left = p_ != 0.0;
  if (singular_left) jacobi_ = gauss_jacobi(options.jacobi_points, 0.0, p_);
  const double inner = edge * std::pow(sigma, static_cast<double>(left_layers));
  add_cell(a, a + inner, singular_left);
  for (std::size_t k = left_layers; k > 0; --k) {
    add_cell(a + edge * std::pow(sigma, static_cast<double>(k)), a + edge * std::pow(sigma, k - 1.0), false);
  }
  const std::size_t middle = std::max<std::size_t>(options.middle_cells, 1);
  const double mid_lo = a + edge;
  const double mid_w = (b - edge - mid_lo) / static_cast<double>(middle);
  for (std::size_t c = 0; c < middle; ++c) {
    add_cell(mid_lo + c * mid_w, c + 1 == middle ? b - edge : mid_lo + (c + 1) * mid_w, false);
  }
  for (std::size_t k = 0; k < options.right_layers; ++k) {
    add_cell(b - edge * std::pow(sigma, static_cast<double>(k)), b - edge * std::pow(sigma, k + 1.0), false);
  }
  add_cell(b - edge * std::pow(sigma, static_cast<double>(options.right_layers)), b, false);

  barycentric_.resize(legendre_->nodes.size());
  for (std::size_t q = 0; q < legendre_->nodes.size(); ++q) {
    const double x = legendre_->nodes[q];
    barycentric_[q] = ((q % 2 == 0) ? 1.0 : -1.0) * std::sqrt((1.0 - x * x) * legendre_->weights[q]);
  }
}

double HistoryRule::integrate(std::span<const double> values) const {
  if (values.size() != nodes_.size()) throw DomainError("history samples do not match the rule");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += weights_[i] * values[i];
  return sum;
}

double HistoryRule::integrate(std::span<const double> values, double t, double mu) const {
  if (values.size() != nodes_.size()) throw DomainError("history samples do not match the rule");
  if (!(t >= b_)) {
    std::ostringstream msg;
    msg << "memory integral over [" << a_ << ", " << b_ << "] evaluated at t=" << t << " before its end";
    throw DomainError(msg.str());
  }
  if (t == b_ && !(mu < 1.0)) throw DomainError("kernel exponent must be < 1 when t is the interval end");
  double sum = 0.0;
  for (const Cell& cell : cells_) {
    const double w = cell.hi - cell.lo;
    if (!cell.jacobi && t - cell.hi < kNearRatio * w) {
      sum += cell_near(cell, values, t, mu);
      continue;
    }
    const std::size_t count = cell.jacobi ? jacobi_->nodes.size() : legendre_->nodes.size();
    for (std::size_t i = cell.first; i < cell.first + count; ++i) {
      sum += weights_[i] * values[i] * std::pow(t - nodes_[i], -mu);
    }
  }
  return sum;
}

double HistoryRule::cell_near(const Cell& cell, std::span<const double> values, double t, double mu) const {
  const std::size_t q_count = legendre_->nodes.size();
  const double half = 0.5 * (cell.hi - cell.lo);
  const double mid = 0.5 * (cell.hi + cell.lo);
  const double* f = values.data() + cell.first;
  const auto& xs = legendre_->nodes;

  // Barycentric evaluation of the cell's interpolating polynomial.
  auto poly = [&](double s) {
    const double x = (s - mid) / half;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t q = 0; q < q_count; ++q) {
      const double diff = x - xs[q];
      if (diff == 0.0) return f[q];
      const double c = barycentric_[q] / diff;
      num += c * f[q];
      den += c;
    }
    return num / den;
  };

  const double d1 = t - cell.hi;
  if (d1 == 0.0) {
    const auto rule = gauss_jacobi(q_count, -mu, 0.0);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule->nodes.size(); ++q) sum += rule->weights[q] * poly(mid + half * rule->nodes[q]);
    return sum * std::pow(half, 1.0 - mu);
  }

  // Split toward hi until every piece is at least its own width away from t.
  const auto gl = gauss_legendre(kNearPoints);
  double sum = 0.0;
  double e = cell.hi - cell.lo;
  double lo = cell.lo;
  while (true) {
    const double next_e = 0.5 * e;
    const bool last = e <= d1;
    const double hi = last ? cell.hi : cell.hi - next_e;
    const double ph = 0.5 * (hi - lo);
    const double pm = 0.5 * (hi + lo);
    for (std::size_t q = 0; q < gl->nodes.size(); ++q) {
      const double s = pm + ph * gl->nodes[q];
      sum += ph * gl->weights[q] * poly(s) * std::pow(t - s, -mu);
    }
    if (last) break;
    lo = hi;
    e = next_e;
  }
  return sum;
}

double history_integral(double beta_cur, double t_k, double t_k1, const std::function<double(double)>& vprime,
                        double vprime_exponent, double t, const HistoryRuleOptions& options) {
  if (!(beta_cur > 0.0 && beta_cur < 1.0)) throw DomainError("current order must lie in (0,1)");
  check_interval(t_k, t_k1);
  if (!(t > t_k)) throw DomainError("history integral needs t > t_k");
  const double upper = std::min(t, t_k1);
  const HistoryRule rule(t_k, upper, vprime_exponent, options);
  std::vector<double> values(rule.nodes().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = vprime(rule.nodes()[i]);
  return rule.integrate(values, t, beta_cur) * rgamma(1.0 - beta_cur);
}

}  // namespace fracstep
