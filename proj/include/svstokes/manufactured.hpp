#pragma once

#include "svstokes/fespace.hpp"

namespace svstokes {

// Rotating flow around the origin on the square (6,12) x (0,6):
//   u = (1 - 1/r^2) (-y, x),  p = 10 Ra sin(pi x / 40) sin(pi y / 20),
//   nu = 1, f = grad p (u is harmonic), g = u on the boundary.
struct ManufacturedCase {
  double Ra = 1.0;
  double nu = 1.0;
  double x0 = 6.0, x1 = 12.0, y0 = 0.0, y1 = 6.0;

  Vec2 u(const Vec2 &x) const;
  Mat2 grad_u(const Vec2 &x) const;
  double p(const Vec2 &x) const;
  Vec2 grad_p(const Vec2 &x) const;

  VectorField velocity() const;
  VectorField load() const;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

ManufacturedCase manufactured(double Ra);

struct ErrorReport {
  int N = 0;
  double h = 0.0;
  double err_l2_u = 0.0;
  double err_h1_u = 0.0;     // full norm
  double err_h1semi_u = 0.0; // gradient only
  double div_norm = 0.0;
  double err_l2_p = 0.0;     // both pressures shifted to zero mean
  int iterations = 0;
};

// Elementwise quadrature of the given degree against the closed forms.
ErrorReport error_norms(const FeFunction &u, const FeFunction &p, const ManufacturedCase &c,
                        int quadrature_degree);

} // namespace svstokes
