#pragma once

#include "svstokes/common.hpp"

#include <vector>

namespace svstokes {

// Rule on the reference triangle {(x, y): x, y >= 0, x + y <= 1}. Points are
// barycentric (1 - x - y, x, y); weights sum to the reference area 1/2.
struct QuadratureRule {
  std::vector<Barycentric> points;
  std::vector<double> weights;
  int exactness_degree = 0;

  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 20;

// Smallest tabulated rule with exactness >= degree. Degrees up to 5 use
// symmetric rules; higher degrees use collapsed Gauss-Jacobi products.
// Throws UnsupportedError above kMaxQuadratureDegree.
QuadratureRule quadrature_rule(int degree);

// Gauss rule on [0, 1] with n points (exact to degree 2n - 1).
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
LineRule gauss_legendre(int n);

// Gauss-Jacobi nodes and weights on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
LineRule gauss_jacobi(int n, double alpha, double beta);

} // namespace svstokes
