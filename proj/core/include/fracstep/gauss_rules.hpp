#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace fracstep {

/// Nodes and weights of an interpolatory rule on the reference interval [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule. Rules are built once and cached.
[[nodiscard]] std::shared_ptr<const QuadratureRule> gauss_legendre(std::size_t n);

/// n-point Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b, a, b > -1.
[[nodiscard]] std::shared_ptr<const QuadratureRule> gauss_jacobi(std::size_t n, double a, double b);

}  // namespace fracstep
