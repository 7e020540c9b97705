#include "fracstep/gauss_rules.hpp"

#include <lapacke.h>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "fracstep/errors.hpp"
#include "fracstep/special_functions.hpp"

namespace fracstep {

namespace {

struct JacobiRecurrence {
  std::vector<double> diag;     // a_k, k = 0..n-1
  std::vector<double> offdiag;  // sqrt(b_k), k = 1..n
  double mu0;
};

JacobiRecurrence jacobi_recurrence(std::size_t n, double a, double b) {
  JacobiRecurrence r;
  r.diag.resize(n);
  r.offdiag.resize(n);
  const double ab = a + b;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i);
    if (i == 0) {
      r.diag[i] = (b - a) / (ab + 2.0);
    } else {
      r.diag[i] = (b * b - a * a) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0));
    }
    const double m = k + 1.0;
    double bm;
    if (i == 0) {
      bm = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * m + ab;
      bm = 4.0 * m * (m + a) * (m + b) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    r.offdiag[i] = std::sqrt(bm);
  }
  r.mu0 = std::pow(2.0, ab + 1.0) * beta_fn(a + 1.0, b + 1.0);
  return r;
}

// Orthonormal polynomials at x: returns p_n(x), p_n'(x) and sum_{k<n} p_k(x)^2.
struct PolyEval {
  double value;
  double derivative;
  double christoffel;
};

PolyEval evaluate_orthonormal(const JacobiRecurrence& r, std::size_t n, double x) {
  double p_prev = 0.0;
  double p = 1.0 / std::sqrt(r.mu0);
  double d_prev = 0.0;
  double d = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += p * p;
    const double sb_prev = k == 0 ? 0.0 : r.offdiag[k - 1];
    const double p_next = ((x - r.diag[k]) * p - sb_prev * p_prev) / r.offdiag[k];
    const double d_next = ((x - r.diag[k]) * d + p - sb_prev * d_prev) / r.offdiag[k];
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p, d, sum};
}

QuadratureRule build_rule(std::size_t n, double a, double b) {
  if (n == 0) throw DomainError("quadrature rule needs at least one node");
  if (!(a > -1.0) || !(b > -1.0)) {
    std::ostringstream msg;
    msg << "Jacobi exponents must exceed -1, got (" << a << ", " << b << ")";
    throw DomainError(msg.str());
  }
  const JacobiRecurrence rec = jacobi_recurrence(n, a, b);

  // Golub-Welsch eigenvalues give the starting nodes.
  std::vector<double> d = rec.diag;
  std::vector<double> e(rec.offdiag.begin(), rec.offdiag.end() - 1);
  e.resize(n > 1 ? n - 1 : 1);
  const lapack_int info =
      LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n), d.data(), e.data(), nullptr, 1);
  if (info != 0) throw NumericError("tridiagonal eigensolve for Gauss nodes failed");

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = d[i];
    for (int it = 0; it < 4; ++it) {
      const PolyEval pe = evaluate_orthonormal(rec, n, x);
      if (pe.derivative == 0.0) break;
      const double dx = pe.value / pe.derivative;
      x -= dx;
      if (std::abs(dx) < 1e-17) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / evaluate_orthonormal(rec, n, x).christoffel;
  }
  return rule;
}

std::mutex cache_mutex;
std::map<std::tuple<std::size_t, double, double>, std::shared_ptr<const QuadratureRule>> cache;

}  // namespace

std::shared_ptr<const QuadratureRule> gauss_jacobi(std::size_t n, double a, double b) {
  const auto key = std::make_tuple(n, a, b);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(build_rule(n, a, b));
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

std::shared_ptr<const QuadratureRule> gauss_legendre(std::size_t n) { return gauss_jacobi(n, 0.0, 0.0); }

}  // namespace fracstep
