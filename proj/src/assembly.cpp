#include "svstokes/assembly.hpp"

#include <numeric>

namespace svstokes {

namespace {

std::vector<int> resolve_order(const Triangulation &mesh, std::span<const int> order) {
  const std::size_t nt = mesh.n_triangles();
  if (order.empty()) {
    std::vector<int> o(nt);
    std::iota(o.begin(), o.end(), 0);
    return o;
  }
  if (order.size() != nt)
    throw Error("assembly: cell order must list every triangle");
  std::vector<char> seen(nt, 0);
  for (int t : order) {
    if (t < 0 || std::size_t(t) >= nt || seen[t])
      throw Error("assembly: cell order is not a permutation");
    seen[t] = 1;
  }
  return {order.begin(), order.end()};
}

void require_vector(const FeSpace &s, const char *who) {
  if (s.components() != 2)
    throw Error(std::string(who) + ": vector space required");
}

void require_scalar(const FeSpace &s, const char *who) {
  if (s.components() != 1)
    throw Error(std::string(who) + ": scalar space required");
}

// Physical gradients of the scalar basis at one quadrature point.
void physical_gradients(const CellGeometry &g, const BasisTabulation &tab, std::vector<Vec2> &out) {
  out.resize(tab.gradients.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = g.physical_gradient(tab.gradients[i]);
}

} // namespace

SparseMatrix assemble_stiffness(const FeSpace &vspace, double nu, std::span<const int> cell_order) {
  require_vector(vspace, "assemble_stiffness");
  const Triangulation &mesh = vspace.mesh();
  const int k = vspace.degree();
  const Tabulation tab = tabulate(k, quadrature_rule(std::max(2 * k, 1)));
  const std::size_t ns = vspace.element().scalar_local_dim();
  TripletBuilder tb(vspace.n_dofs(), vspace.n_dofs());
  tb.reserve(mesh.n_triangles() * ns * ns * 2);
  std::vector<double> local(ns * ns);
  std::vector<Vec2> grad;
  for (int t : resolve_order(mesh, cell_order)) {
    const CellGeometry g = cell_geometry(mesh, t);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      physical_gradients(g, tab.at[q], grad);
      const double w = tab.rule.weights[q] * g.abs_det() * nu;
      for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < ns; ++j)
          local[i * ns + j] += w * dot(grad[i], grad[j]);
    }
    const auto nodes = vspace.cell_nodes(t);
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t j = 0; j < ns; ++j)
        for (int c = 0; c < 2; ++c)
          tb.add(2 * nodes[i] + c, 2 * nodes[j] + c, local[i * ns + j]);
  }
  return tb.build();
}

SparseMatrix assemble_graddiv(const FeSpace &vspace, std::span<const int> cell_order) {
  require_vector(vspace, "assemble_graddiv");
  const Triangulation &mesh = vspace.mesh();
  const int k = vspace.degree();
  const Tabulation tab = tabulate(k, quadrature_rule(std::max(2 * k, 1)));
  const std::size_t nl = vspace.element().local_dim();
  TripletBuilder tb(vspace.n_dofs(), vspace.n_dofs());
  tb.reserve(mesh.n_triangles() * nl * nl);
  std::vector<double> local(nl * nl), div(nl);
  std::vector<Vec2> grad;
  for (int t : resolve_order(mesh, cell_order)) {
    const CellGeometry g = cell_geometry(mesh, t);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      physical_gradients(g, tab.at[q], grad);
      for (std::size_t i = 0; i < grad.size(); ++i) {
        div[2 * i] = grad[i].x;
        div[2 * i + 1] = grad[i].y;
      }
      const double w = tab.rule.weights[q] * g.abs_det();
      for (std::size_t a = 0; a < nl; ++a)
        for (std::size_t b = 0; b < nl; ++b)
          local[a * nl + b] += w * div[a] * div[b];
    }
    const auto dofs = vspace.cell_dofs(t);
    for (std::size_t a = 0; a < nl; ++a)
      for (std::size_t b = 0; b < nl; ++b)
        tb.add(dofs[a], dofs[b], local[a * nl + b]);
  }
  return tb.build();
}

SparseMatrix assemble_div_coupling(const FeSpace &vspace, const FeSpace &pspace,
                                   std::span<const int> cell_order) {
  require_vector(vspace, "assemble_div_coupling");
  require_scalar(pspace, "assemble_div_coupling");
  if (&vspace.mesh() != &pspace.mesh() && !(vspace.mesh() == pspace.mesh()))
    throw Error("assemble_div_coupling: spaces live on different meshes");
  const Triangulation &mesh = vspace.mesh();
  const int k = vspace.degree();
  const QuadratureRule rule = quadrature_rule(std::max(k + pspace.degree(), 1));
  const Tabulation vt = tabulate(k, rule), pt = tabulate(pspace.degree(), rule);
  const std::size_t nl = vspace.element().local_dim(), np = pspace.element().local_dim();
  TripletBuilder tb(pspace.n_dofs(), vspace.n_dofs());
  tb.reserve(mesh.n_triangles() * nl * np);
  std::vector<double> local(np * nl);
  std::vector<Vec2> grad;
  for (int t : resolve_order(mesh, cell_order)) {
    const CellGeometry g = cell_geometry(mesh, t);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      physical_gradients(g, vt.at[q], grad);
      const double w = rule.weights[q] * g.abs_det();
      for (std::size_t r = 0; r < np; ++r) {
        const double chi = w * pt.at[q].values[r];
        for (std::size_t i = 0; i < grad.size(); ++i) {
          local[r * nl + 2 * i] += chi * grad[i].x;
          local[r * nl + 2 * i + 1] += chi * grad[i].y;
        }
      }
    }
    const auto vd = vspace.cell_dofs(t);
    const auto pd = pspace.cell_dofs(t);
    for (std::size_t r = 0; r < np; ++r)
      for (std::size_t a = 0; a < nl; ++a)
        tb.add(pd[r], vd[a], local[r * nl + a]);
  }
  return tb.build();
}

SparseMatrix assemble_pressure_mass(const FeSpace &pspace, std::span<const int> cell_order) {
  require_scalar(pspace, "assemble_pressure_mass");
  const Triangulation &mesh = pspace.mesh();
  const int p = pspace.degree();
  const Tabulation tab = tabulate(p, quadrature_rule(std::max(2 * p, 1)));
  const std::size_t n = pspace.element().local_dim();
  TripletBuilder tb(pspace.n_dofs(), pspace.n_dofs());
  tb.reserve(mesh.n_triangles() * n * n);
  for (int t : resolve_order(mesh, cell_order)) {
    const double det = cell_geometry(mesh, t).abs_det();
    const auto dofs = pspace.cell_dofs(t);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < tab.rule.size(); ++q)
          s += tab.rule.weights[q] * tab.at[q].values[a] * tab.at[q].values[b];
        tb.add(dofs[a], dofs[b], s * det);
      }
  }
  return tb.build();
}

std::vector<double> assemble_pressure_mean(const FeSpace &pspace) {
  require_scalar(pspace, "assemble_pressure_mean");
  const Triangulation &mesh = pspace.mesh();
  const int p = pspace.degree();
  const Tabulation tab = tabulate(p, quadrature_rule(std::max(p, 1)));
  std::vector<double> m(pspace.n_dofs(), 0.0);
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const double det = cell_geometry(mesh, int(t)).abs_det();
    const auto dofs = pspace.cell_dofs(int(t));
    for (std::size_t a = 0; a < dofs.size(); ++a)
      for (std::size_t q = 0; q < tab.rule.size(); ++q)
        m[dofs[a]] += tab.rule.weights[q] * tab.at[q].values[a] * det;
  }
  return m;
}

std::vector<double> assemble_load(const FeSpace &vspace, const VectorField &f, std::span<const int> cell_order) {
  require_vector(vspace, "assemble_load");
  const Triangulation &mesh = vspace.mesh();
  const int k = vspace.degree();
  const Tabulation tab = tabulate(k, quadrature_rule(2 * k + 4));
  std::vector<double> F(vspace.n_dofs(), 0.0);
  for (int t : resolve_order(mesh, cell_order)) {
    const CellGeometry g = cell_geometry(mesh, t);
    const auto nodes = vspace.cell_nodes(t);
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      const Vec2 fx = f(g.to_physical(tab.rule.points[q]));
      const double w = tab.rule.weights[q] * g.abs_det();
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double phi = w * tab.at[q].values[i];
        F[2 * nodes[i]] += phi * fx.x;
        F[2 * nodes[i] + 1] += phi * fx.y;
      }
    }
  }
  return F;
}

AssembledSystem apply_dirichlet(const SparseMatrix &a, const std::vector<double> &rhs, const BoundaryData &bc) {
  const FeSpace &space = *bc.space;
  if (a.n_rows() != space.n_dofs() || a.n_cols() != space.n_dofs() || rhs.size() != space.n_dofs())
    throw Error("apply_dirichlet: system does not match the boundary data space");
  if (bc.values.size() != bc.dofs.size())
    throw Error("apply_dirichlet: boundary values and dofs differ in length");
  std::vector<char> fixed(space.n_dofs(), 0);
  for (int d : bc.dofs) {
    if (d < 0 || std::size_t(d) >= space.n_dofs() || !space.is_boundary_dof(d))
      throw Error("apply_dirichlet: dof " + std::to_string(d) + " is not a boundary dof");
    fixed[d] = 1;
  }

  AssembledSystem sys;
  sys.lift = bc.lift();
  sys.constrained_dofs = bc.dofs;
  sys.rhs = apply_dirichlet_rhs(a, rhs, bc);

  TripletBuilder tb(a.n_rows(), a.n_cols());
  tb.reserve(a.nnz());
  for (std::size_t r = 0; r < a.n_rows(); ++r) {
    if (fixed[r]) {
      tb.add(int(r), int(r), 1.0);
      continue;
    }
    for (int k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k)
      if (!fixed[a.col_idx()[k]])
        tb.add(int(r), a.col_idx()[k], a.values()[k]);
  }
  sys.matrix = tb.build();
  return sys;
}

std::vector<double> apply_dirichlet_rhs(const SparseMatrix &a, const std::vector<double> &rhs,
                                        const BoundaryData &bc) {
  std::vector<double> out = rhs;
  a.multiply_add(bc.lift().coefficients, out, -1.0);
  for (std::size_t i = 0; i < bc.dofs.size(); ++i)
    out[bc.dofs[i]] = bc.values[i];
  return out;
}

std::pair<SparseMatrix, std::vector<double>> eliminate_coupling(const SparseMatrix &b, const BoundaryData &bc) {
  const FeSpace &space = *bc.space;
  if (b.n_cols() != space.n_dofs())
    throw Error("eliminate_coupling: coupling does not match the boundary data space");
  std::vector<char> fixed(space.n_dofs(), 0);
  for (int d : bc.dofs)
    fixed[d] = 1;
  std::vector<double> g(b.n_rows(), 0.0);
  b.multiply_add(bc.lift().coefficients, g, -1.0);
  TripletBuilder tb(b.n_rows(), b.n_cols());
  tb.reserve(b.nnz());
  for (std::size_t r = 0; r < b.n_rows(); ++r)
    for (int k = b.row_ptr()[r]; k < b.row_ptr()[r + 1]; ++k)
      if (!fixed[b.col_idx()[k]])
        tb.add(int(r), b.col_idx()[k], b.values()[k]);
  return {tb.build(), std::move(g)};
}

} // namespace svstokes
