#include "svstokes/manufactured.hpp"

#include <numbers>

namespace svstokes {

namespace {

double radius2(const Vec2 &x) {
  const double r2 = x.x * x.x + x.y * x.y;
  if (r2 < 1e-12)
    throw Error("manufactured solution evaluated at the origin");
  return r2;
}

} // namespace

Vec2 ManufacturedCase::u(const Vec2 &x) const {
  const double s = 1.0 - 1.0 / radius2(x);
  return {-s * x.y, s * x.x};
}

// With s = 1 - 1/r^2, ds/dx = 2x/r^4 and ds/dy = 2y/r^4:
//   du1/dx = -2xy/r^4        du1/dy = -s - 2y^2/r^4
//   du2/dx = s + 2x^2/r^4    du2/dy = 2xy/r^4
Mat2 ManufacturedCase::grad_u(const Vec2 &x) const {
  const double r2 = radius2(x);
  const double s = 1.0 - 1.0 / r2, r4 = r2 * r2;
  Mat2 g;
  g[0][0] = -2.0 * x.x * x.y / r4;
  g[0][1] = -s - 2.0 * x.y * x.y / r4;
  g[1][0] = s + 2.0 * x.x * x.x / r4;
  g[1][1] = 2.0 * x.x * x.y / r4;
  return g;
}

double ManufacturedCase::p(const Vec2 &x) const {
  using std::numbers::pi;
  return 10.0 * Ra * std::sin(pi * x.x / 40.0) * std::sin(pi * x.y / 20.0);
}

// dp/dx = 10 Ra (pi/40) cos(pi x/40) sin(pi y/20)
// dp/dy = 10 Ra (pi/20) sin(pi x/40) cos(pi y/20)
Vec2 ManufacturedCase::grad_p(const Vec2 &x) const {
  using std::numbers::pi;
  const double a = pi * x.x / 40.0, b = pi * x.y / 20.0;
  return {10.0 * Ra * pi / 40.0 * std::cos(a) * std::sin(b), 10.0 * Ra * pi / 20.0 * std::sin(a) * std::cos(b)};
}

VectorField ManufacturedCase::velocity() const {
  return [c = *this](const Vec2 &x) { return c.u(x); };
}

// -nu lap u + grad p with lap u = 0
VectorField ManufacturedCase::load() const {
  return [c = *this](const Vec2 &x) { return c.grad_p(x); };
}

ManufacturedCase manufactured(double Ra) {
  ManufacturedCase c;
  c.Ra = Ra;
  return c;
}

ErrorReport error_norms(const FeFunction &u, const FeFunction &p, const ManufacturedCase &c,
                        int quadrature_degree) {
  const FeSpace &vs = *u.space, &ps = *p.space;
  const Triangulation &mesh = vs.mesh();
  const QuadratureRule rule = quadrature_rule(quadrature_degree);
  const Tabulation vt = tabulate(vs.degree(), rule), pt = tabulate(ps.degree(), rule);

  double l2 = 0, semi = 0, div = 0;
  double ph_int = 0, p_int = 0, area = 0;
  // second pass needs the means, so keep the pressure samples
  std::vector<double> ph_vals, p_vals, wts;
  ph_vals.reserve(mesh.n_triangles() * rule.size());
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeometry g = cell_geometry(mesh, int(t));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * g.abs_det();
      const Vec2 x = g.to_physical(rule.points[q]);
      const Vec2 e = evaluate_vector(u, int(t), vt.at[q]) - c.u(x);
      const Mat2 Gh = evaluate_vector_gradient(u, int(t), g, vt.at[q]);
      const Mat2 G = c.grad_u(x);
      double ge = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          ge += (Gh[i][j] - G[i][j]) * (Gh[i][j] - G[i][j]);
      const double d = Gh[0][0] + Gh[1][1];
      l2 += w * dot(e, e);
      semi += w * ge;
      div += w * d * d;

      const double ph = evaluate_scalar(p, int(t), pt.at[q]), pe = c.p(x);
      ph_vals.push_back(ph);
      p_vals.push_back(pe);
      wts.push_back(w);
      ph_int += w * ph;
      p_int += w * pe;
      area += w;
    }
  }
  const double ph_mean = ph_int / area, p_mean = p_int / area;
  double pl2 = 0;
  for (std::size_t i = 0; i < wts.size(); ++i) {
    const double d = (ph_vals[i] - ph_mean) - (p_vals[i] - p_mean);
    pl2 += wts[i] * d * d;
  }

  ErrorReport r;
  r.h = mesh.h_max();
  r.err_l2_u = std::sqrt(l2);
  r.err_h1semi_u = std::sqrt(semi);
  r.err_h1_u = std::sqrt(l2 + semi);
  r.div_norm = std::sqrt(div);
  r.err_l2_p = std::sqrt(pl2);
  return r;
}

} // namespace svstokes
