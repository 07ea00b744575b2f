#include "svstokes/fespace.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace svstokes {

CellGeometry cell_geometry(const Triangulation &mesh, int t) {
  const auto &tr = mesh.triangles()[t];
  const auto &P = mesh.vertices();
  CellGeometry g;
  g.origin = P[tr[0]];
  g.j00 = P[tr[1]].x - P[tr[0]].x;
  g.j01 = P[tr[2]].x - P[tr[0]].x;
  g.j10 = P[tr[1]].y - P[tr[0]].y;
  g.j11 = P[tr[2]].y - P[tr[0]].y;
  g.det = g.j00 * g.j11 - g.j01 * g.j10;
  return g;
}

FeSpace::FeSpace(std::shared_ptr<const Triangulation> mesh, ElementKind element,
                 bool zero_mean_constrained)
    : mesh_(std::move(mesh)), element_(element), zero_mean_(zero_mean_constrained) {
  check_element(element_);
  const Triangulation &m = *mesh_;
  const int p = element_.degree;
  const int nt = static_cast<int>(m.n_triangles());
  const auto nodes = lattice(p);
  const int nloc = static_cast<int>(nodes.size());
  cell_nodes_.resize(static_cast<std::size_t>(nt) * nloc);

  if (!element_.continuous()) {
    node_coords_.resize(cell_nodes_.size());
    for (int t = 0; t < nt; ++t) {
      const auto g = cell_geometry(m, t);
      for (int i = 0; i < nloc; ++i) {
        cell_nodes_[t * nloc + i] = t * nloc + i;
        node_coords_[t * nloc + i] = g.to_physical(lattice_point(nodes[i], p));
      }
    }
  } else {
    const int nv = static_cast<int>(m.n_vertices());
    const int ne = static_cast<int>(m.n_edges());
    const int per_edge = p - 1;
    const int per_cell = nloc - 3 - 3 * per_edge;
    const int edge_base = nv, cell_base = nv + ne * per_edge;
    node_coords_.resize(static_cast<std::size_t>(cell_base) + static_cast<std::size_t>(nt) * per_cell);

    const auto &P = m.vertices();
    for (int v = 0; v < nv; ++v)
      node_coords_[v] = P[v];
    for (int e = 0; e < ne; ++e) {
      const Vec2 a = P[m.edges()[e][0]], b = P[m.edges()[e][1]];
      for (int j = 1; j <= per_edge; ++j)
        node_coords_[edge_base + e * per_edge + j - 1] = a + (double(j) / p) * (b - a);
    }

    for (int t = 0; t < nt; ++t) {
      const auto &tr = m.triangles()[t];
      int *cn = &cell_nodes_[t * nloc];
      int k = 0;
      for (int i = 0; i < 3; ++i)
        cn[k++] = tr[i];
      for (int le = 0; le < 3; ++le) {
        const int ge = m.triangle_edges()[t][le];
        const bool forward = tr[(le + 1) % 3] == m.edges()[ge][0];
        for (int j = 1; j <= per_edge; ++j) {
          const int gj = forward ? j : p - j;
          cn[k++] = edge_base + ge * per_edge + gj - 1;
        }
      }
      const auto g = cell_geometry(m, t);
      for (int i = 0; i < per_cell; ++i, ++k) {
        cn[k] = cell_base + t * per_cell + i;
        node_coords_[cn[k]] = g.to_physical(lattice_point(nodes[k], p));
      }
    }

    std::vector<char> bnode(node_coords_.size(), 0);
    for (int e = 0; e < ne; ++e) {
      if (!m.is_boundary_edge(e))
        continue;
      bnode[m.edges()[e][0]] = 1;
      bnode[m.edges()[e][1]] = 1;
      for (int j = 0; j < per_edge; ++j)
        bnode[edge_base + e * per_edge + j] = 1;
    }
    for (int n = 0; n < static_cast<int>(bnode.size()); ++n)
      if (bnode[n])
        boundary_nodes_.push_back(n);
  }

  const int nc = components();
  cell_dofs_.resize(cell_nodes_.size() * nc);
  for (std::size_t i = 0; i < cell_nodes_.size(); ++i)
    for (int c = 0; c < nc; ++c)
      cell_dofs_[i * nc + c] = cell_nodes_[i] * nc + c;

  dof_on_boundary_.assign(n_dofs(), 0);
  for (int n : boundary_nodes_)
    for (int c = 0; c < nc; ++c) {
      boundary_dofs_.push_back(n * nc + c);
      dof_on_boundary_[n * nc + c] = 1;
    }
}

std::shared_ptr<const FeSpace> build_space(std::shared_ptr<const Triangulation> mesh,
                                           ElementKind element, bool zero_mean_constrained) {
  return std::make_shared<const FeSpace>(std::move(mesh), element, zero_mean_constrained);
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> s, std::vector<double> c)
    : space(std::move(s)), coefficients(std::move(c)) {
  if (coefficients.size() != space->n_dofs())
    throw Error("FeFunction: coefficient count " + std::to_string(coefficients.size()) +
                " does not match space dimension " + std::to_string(space->n_dofs()));
}

FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarField &f) {
  if (!space->element().continuous())
    throw UnsupportedError("interpolate: discontinuous space, use project_dg");
  if (space->components() != 1)
    throw Error("interpolate: scalar field into vector space");
  FeFunction fn(space);
  const auto &X = space->node_coords();
  for (std::size_t n = 0; n < X.size(); ++n)
    fn.coefficients[n] = f(X[n]);
  return fn;
}

FeFunction interpolate(std::shared_ptr<const FeSpace> space, const VectorField &f) {
  if (!space->element().continuous())
    throw UnsupportedError("interpolate: discontinuous space, use project_dg");
  if (space->components() != 2)
    throw Error("interpolate: vector field into scalar space");
  FeFunction fn(space);
  const auto &X = space->node_coords();
  for (std::size_t n = 0; n < X.size(); ++n) {
    const Vec2 v = f(X[n]);
    fn.coefficients[2 * n] = v.x;
    fn.coefficients[2 * n + 1] = v.y;
  }
  return fn;
}

Tabulation tabulate(int degree, const QuadratureRule &rule) {
  Tabulation tab{rule, {}};
  tab.at.reserve(rule.size());
  for (const auto &pt : rule.points)
    tab.at.push_back(reference_basis(degree, pt));
  return tab;
}

FeFunction project_dg(std::shared_ptr<const FeSpace> space, const CellField &f,
                      int quadrature_degree) {
  if (space->element().continuous() || space->components() != 1)
    throw UnsupportedError("project_dg: target must be a scalar discontinuous space");
  const int p = space->degree();
  const int n = space->element().scalar_local_dim();
  const auto tab = tabulate(p, quadrature_rule(quadrature_degree < 0 ? 2 * p + 2 : quadrature_degree));

  // The affine map scales the local mass matrix by |det J|, which cancels
  // against the load, so one reference factorization serves every cell.
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < tab.rule.size(); ++q)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        mass(i, j) += tab.rule.weights[q] * tab.at[q].values[i] * tab.at[q].values[j];
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(mass);

  FeFunction out(space);
  Eigen::VectorXd rhs(n);
  for (int t = 0; t < static_cast<int>(space->mesh().n_triangles()); ++t) {
    rhs.setZero();
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      const double fq = f(t, tab.rule.points[q]) * tab.rule.weights[q];
      for (int i = 0; i < n; ++i)
        rhs[i] += fq * tab.at[q].values[i];
    }
    const Eigen::VectorXd c = ldlt.solve(rhs);
    const auto dofs = space->cell_dofs(t);
    for (int i = 0; i < n; ++i)
      out.coefficients[dofs[i]] = c[i];
  }
  return out;
}

double evaluate_scalar(const FeFunction &fn, int t, const BasisTabulation &tab) {
  const auto nodes = fn.space->cell_nodes(t);
  const int nc = fn.space->components();
  double v = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    v += fn.coefficients[nodes[i] * nc] * tab.values[i];
  return v;
}

Vec2 evaluate_vector(const FeFunction &fn, int t, const BasisTabulation &tab) {
  const auto nodes = fn.space->cell_nodes(t);
  Vec2 v;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    v.x += fn.coefficients[2 * nodes[i]] * tab.values[i];
    v.y += fn.coefficients[2 * nodes[i] + 1] * tab.values[i];
  }
  return v;
}

Vec2 evaluate_gradient(const FeFunction &fn, int t, const CellGeometry &g,
                       const BasisTabulation &tab) {
  const auto nodes = fn.space->cell_nodes(t);
  const int nc = fn.space->components();
  Vec2 r;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    r += fn.coefficients[nodes[i] * nc] * tab.gradients[i];
  return g.physical_gradient(r);
}

Mat2 evaluate_vector_gradient(const FeFunction &fn, int t, const CellGeometry &g,
                              const BasisTabulation &tab) {
  const auto nodes = fn.space->cell_nodes(t);
  Vec2 rx, ry;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    rx += fn.coefficients[2 * nodes[i]] * tab.gradients[i];
    ry += fn.coefficients[2 * nodes[i] + 1] * tab.gradients[i];
  }
  const Vec2 gx = g.physical_gradient(rx), gy = g.physical_gradient(ry);
  return {{{gx.x, gx.y}, {gy.x, gy.y}}};
}

double evaluate_scalar(const FeFunction &fn, int t, const Barycentric &b) {
  return evaluate_scalar(fn, t, reference_basis(fn.space->degree(), b));
}

Vec2 evaluate_vector(const FeFunction &fn, int t, const Barycentric &b) {
  return evaluate_vector(fn, t, reference_basis(fn.space->degree(), b));
}

Vec2 evaluate_gradient(const FeFunction &fn, int t, const Barycentric &b) {
  return evaluate_gradient(fn, t, cell_geometry(fn.space->mesh(), t),
                           reference_basis(fn.space->degree(), b));
}

Mat2 evaluate_vector_gradient(const FeFunction &fn, int t, const Barycentric &b) {
  return evaluate_vector_gradient(fn, t, cell_geometry(fn.space->mesh(), t),
                                  reference_basis(fn.space->degree(), b));
}

double evaluate_divergence(const FeFunction &fn, int t, const Barycentric &b) {
  const Mat2 g = evaluate_vector_gradient(fn, t, b);
  return g[0][0] + g[1][1];
}

void write_function(std::ostream &out, const FeFunction &fn) {
  out << "fefunction " << to_string(fn.space->element().family) << ' '
      << fn.space->degree() << ' ' << fn.coefficients.size() << '\n';
  char buf[32];
  for (double c : fn.coefficients) {
    std::snprintf(buf, sizeof buf, "%.17g\n", c);
    out << buf;
  }
}

FeFunction read_function(std::istream &in, std::shared_ptr<const FeSpace> space) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    throw ParseError(1, "missing fefunction header");
  ++line_no;
  std::istringstream hs(line);
  std::string tag, family;
  long degree = -1, n = -1;
  if (!(hs >> tag >> family >> degree >> n) || tag != "fefunction")
    throw ParseError(line_no, "malformed fefunction header");
  if (family_from_string(family) != space->element().family || degree != space->degree() ||
      n != static_cast<long>(space->n_dofs()))
    throw ParseError(line_no, "fefunction header does not match the target space");
  FeFunction fn(space);
  for (long i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw ParseError(line_no + 1, "unexpected end of coefficients");
    ++line_no;
    std::size_t used = 0;
    try {
      fn.coefficients[i] = std::stod(line, &used);
    } catch (const std::exception &) {
      throw ParseError(line_no, "non-numeric coefficient '" + line + "'");
    }
    if (line.find_first_not_of(" \t\r", used) != std::string::npos)
      throw ParseError(line_no, "trailing characters after coefficient");
  }
  return fn;
}

} // namespace svstokes
