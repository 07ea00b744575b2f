#pragma once

#include "svstokes/element.hpp"
#include "svstokes/mesh.hpp"
#include "svstokes/quadrature.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace svstokes {

using ScalarField = std::function<double(const Vec2 &)>;
using VectorField = std::function<Vec2(const Vec2 &)>;

// Affine map x = origin + J * (xi, eta) of one triangle.
struct CellGeometry {
  Vec2 origin;
  double j00 = 0, j01 = 0, j10 = 0, j11 = 0;
  double det = 0;

  Vec2 to_physical(const Barycentric &b) const {
    return {origin.x + j00 * b[1] + j01 * b[2], origin.y + j10 * b[1] + j11 * b[2]};
  }
  // Reference gradient -> physical gradient (J^{-T} g).
  Vec2 physical_gradient(const Vec2 &g) const {
    return {(j11 * g.x - j10 * g.y) / det, (-j01 * g.x + j00 * g.y) / det};
  }
  double abs_det() const { return std::abs(det); }
};

CellGeometry cell_geometry(const Triangulation &mesh, int t);

// Global degree-of-freedom map for one Lagrange space on one mesh.
//
// Scalar nodes are numbered vertices first, then p-1 nodes per edge (ordered
// from the lower to the higher global vertex index), then cell interiors.
// Vector spaces interleave components: dof = 2 * node + component.
// Discontinuous spaces own every node per triangle.
class FeSpace {
public:
  FeSpace(std::shared_ptr<const Triangulation> mesh, ElementKind element,
          bool zero_mean_constrained = false);

  const Triangulation &mesh() const { return *mesh_; }
  const std::shared_ptr<const Triangulation> &mesh_ptr() const { return mesh_; }
  const ElementKind &element() const { return element_; }
  int degree() const { return element_.degree; }
  int components() const { return element_.components(); }

  std::size_t n_nodes() const { return node_coords_.size(); }
  std::size_t n_dofs() const { return n_nodes() * components(); }

  // Scalar node indices of triangle t in local lattice order.
  std::span<const int> cell_nodes(int t) const {
    const std::size_t n = element_.scalar_local_dim();
    return {cell_nodes_.data() + t * n, n};
  }
  // Global dofs of triangle t: (node0.x, node0.y, node1.x, ...) for vectors.
  std::span<const int> cell_dofs(int t) const {
    const std::size_t n = element_.local_dim();
    return {cell_dofs_.data() + t * n, n};
  }

  const std::vector<Vec2> &node_coords() const { return node_coords_; }
  Vec2 dof_coord(int dof) const { return node_coords_[dof / components()]; }

  // Sorted dofs whose node lies on the boundary (continuous families only).
  const std::vector<int> &boundary_dofs() const { return boundary_dofs_; }
  const std::vector<int> &boundary_nodes() const { return boundary_nodes_; }
  bool is_boundary_dof(int dof) const { return dof_on_boundary_[dof] != 0; }

  bool zero_mean_constrained() const { return zero_mean_; }

private:
  std::shared_ptr<const Triangulation> mesh_;
  ElementKind element_;
  bool zero_mean_;
  std::vector<int> cell_nodes_;
  std::vector<int> cell_dofs_;
  std::vector<Vec2> node_coords_;
  std::vector<int> boundary_nodes_;
  std::vector<int> boundary_dofs_;
  std::vector<char> dof_on_boundary_;
};

std::shared_ptr<const FeSpace> build_space(std::shared_ptr<const Triangulation> mesh,
                                           ElementKind element,
                                           bool zero_mean_constrained = false);

struct FeFunction {
  std::shared_ptr<const FeSpace> space;
  std::vector<double> coefficients;

  FeFunction() = default;
  explicit FeFunction(std::shared_ptr<const FeSpace> s)
      : space(std::move(s)), coefficients(space->n_dofs(), 0.0) {}
  FeFunction(std::shared_ptr<const FeSpace> s, std::vector<double> c);
};

// Nodal interpolation; throws UnsupportedError for discontinuous spaces.
FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarField &f);
FeFunction interpolate(std::shared_ptr<const FeSpace> space, const VectorField &f);

// Elementwise L2 projection onto a discontinuous space of a function given
// cellwise at barycentric points.
using CellField = std::function<double(int cell, const Barycentric &)>;
FeFunction project_dg(std::shared_ptr<const FeSpace> space, const CellField &f,
                      int quadrature_degree = -1);

// Point evaluation on triangle t at barycentric coordinates.
double evaluate_scalar(const FeFunction &fn, int t, const Barycentric &b);
Vec2 evaluate_vector(const FeFunction &fn, int t, const Barycentric &b);
Vec2 evaluate_gradient(const FeFunction &fn, int t, const Barycentric &b);
Mat2 evaluate_vector_gradient(const FeFunction &fn, int t, const Barycentric &b);
double evaluate_divergence(const FeFunction &fn, int t, const Barycentric &b);

// Same, reusing a tabulation of the reference basis at the point.
double evaluate_scalar(const FeFunction &fn, int t, const BasisTabulation &tab);
Vec2 evaluate_vector(const FeFunction &fn, int t, const BasisTabulation &tab);
Vec2 evaluate_gradient(const FeFunction &fn, int t, const CellGeometry &g,
                       const BasisTabulation &tab);
Mat2 evaluate_vector_gradient(const FeFunction &fn, int t, const CellGeometry &g,
                              const BasisTabulation &tab);

// Reference basis tabulated at every point of a quadrature rule.
struct Tabulation {
  QuadratureRule rule;
  std::vector<BasisTabulation> at;
};
Tabulation tabulate(int degree, const QuadratureRule &rule);

// Text form: "fefunction <family> <degree> <n_dofs>" then one coefficient per line.
void write_function(std::ostream &out, const FeFunction &fn);
FeFunction read_function(std::istream &in, std::shared_ptr<const FeSpace> space);

} // namespace svstokes
