#include "svstokes/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace svstokes {

LineRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1)
    throw UnsupportedError("gauss_jacobi: need at least one point");
  // Golub-Welsch on the symmetric Jacobi matrix of the three-term recurrence.
  const double ab = alpha + beta;
  Eigen::VectorXd diag(n), off(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) {
    const double nab = 2.0 * k + ab;
    if (k == 0)
      diag[k] = (beta - alpha) / (ab + 2.0);
    else
      diag[k] = (beta * beta - alpha * alpha) / (nab * (nab + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double nab = 2.0 * k + ab;
    const double b = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                     (nab * nab * (nab + 1.0) * (nab - 1.0));
    off[k - 1] = std::sqrt(b);
  }
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
                     std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);

  LineRule r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.points[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

LineRule gauss_legendre(int n) {
  LineRule r = gauss_jacobi(n, 0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    r.points[i] = 0.5 * (r.points[i] + 1.0);
    r.weights[i] *= 0.5;
  }
  return r;
}

namespace {

void add_orbit3(QuadratureRule &q, double a, double w) {
  // permutations of (a, a, 1 - 2a)
  const double b = 1.0 - 2.0 * a;
  q.points.push_back({b, a, a});
  q.points.push_back({a, b, a});
  q.points.push_back({a, a, b});
  for (int i = 0; i < 3; ++i)
    q.weights.push_back(w);
}

QuadratureRule collapsed_rule(int degree) {
  // x = s, y = (1 - s) t maps the unit square onto the reference triangle with
  // Jacobian (1 - s); the s-direction absorbs it as a Gauss-Jacobi(1, 0) weight.
  const int n = (degree + 2) / 2;
  const LineRule js = gauss_jacobi(n, 1.0, 0.0);
  const LineRule gt = gauss_legendre(n);
  QuadratureRule q;
  q.exactness_degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (1.0 + js.points[i]);
    // d s = dx/2 and (1 - s) = (1 - x)/2 turn the [-1,1] weight into 1/4 of it.
    const double ws = 0.25 * js.weights[i];
    for (int j = 0; j < n; ++j) {
      const double x = s, y = (1.0 - s) * gt.points[j];
      q.points.push_back({1.0 - x - y, x, y});
      q.weights.push_back(ws * gt.weights[j]);
    }
  }
  return q;
}

} // namespace

QuadratureRule quadrature_rule(int degree) {
  if (degree < 0)
    throw UnsupportedError("quadrature_rule: negative degree");
  if (degree > kMaxQuadratureDegree)
    throw UnsupportedError("quadrature_rule: degree " + std::to_string(degree) +
                           " exceeds the implemented table (max " +
                           std::to_string(kMaxQuadratureDegree) + ")");
  QuadratureRule q;
  if (degree <= 1) {
    q.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    q.weights.push_back(0.5);
    q.exactness_degree = 1;
  } else if (degree == 2) {
    add_orbit3(q, 1.0 / 6.0, 1.0 / 6.0);
    q.exactness_degree = 2;
  } else if (degree <= 4) {
    // Strang-Fix / Dunavant six-point rule
    add_orbit3(q, 0.44594849091596488632, 0.5 * 0.22338158967801146570);
    add_orbit3(q, 0.09157621350977074346, 0.5 * 0.10995174365532186764);
    q.exactness_degree = 4;
  } else if (degree == 5) {
    // Radon seven-point rule
    const double r15 = std::sqrt(15.0);
    q.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    q.weights.push_back(0.5 * 9.0 / 40.0);
    add_orbit3(q, (6.0 - r15) / 21.0, 0.5 * (155.0 - r15) / 1200.0);
    add_orbit3(q, (6.0 + r15) / 21.0, 0.5 * (155.0 + r15) / 1200.0);
    q.exactness_degree = 5;
  } else {
    q = collapsed_rule(degree);
  }
  return q;
}

} // namespace svstokes
