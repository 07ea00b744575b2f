#include "svstokes/boundary.hpp"

#include <algorithm>

namespace svstokes {

Barycentric BoundaryFace::at(double s) const {
  Barycentric l{0.0, 0.0, 0.0};
  l[(local_edge + 1) % 3] = 1.0 - s;
  l[(local_edge + 2) % 3] = s;
  return l;
}

BoundaryFace boundary_face(const Triangulation &tri, int edge) {
  if (edge < 0 || edge >= static_cast<int>(tri.n_edges()))
    throw Error("boundary_face: edge index out of range");
  if (!tri.is_boundary_edge(edge))
    throw Error("boundary_face: edge " + std::to_string(edge) + " is an interior edge");
  BoundaryFace f;
  f.edge = edge;
  f.triangle = tri.edge_triangles()[edge][0];
  const auto &te = tri.triangle_edges()[f.triangle];
  f.local_edge = static_cast<int>(std::find(te.begin(), te.end(), edge) - te.begin());
  const auto &tr = tri.triangles()[f.triangle];
  f.a = tr[(f.local_edge + 1) % 3];
  f.b = tr[(f.local_edge + 2) % 3];
  const Vec2 d = tri.vertices()[f.b] - tri.vertices()[f.a];
  f.length = norm(d);
  f.normal = {d.y / f.length, -d.x / f.length};
  return f;
}

std::vector<BoundaryFace> boundary_faces(const Triangulation &tri) {
  std::vector<BoundaryFace> out;
  for (int e = 0; e < static_cast<int>(tri.n_edges()); ++e)
    if (tri.is_boundary_edge(e))
      out.push_back(boundary_face(tri, e));
  return out;
}

double boundary_normal_flux(const FeFunction &v) {
  if (v.space->components() != 2)
    throw Error("boundary_normal_flux: vector-valued function required");
  const LineRule g = gauss_legendre(v.space->degree() + 2);
  double flux = 0.0;
  for (const auto &f : boundary_faces(v.space->mesh())) {
    double s = 0.0;
    for (std::size_t q = 0; q < g.points.size(); ++q)
      s += g.weights[q] * dot(evaluate_vector(v, f.triangle, f.at(g.points[q])), f.normal);
    flux += s * f.length;
  }
  return flux;
}

double boundary_normal_flux(const Triangulation &tri, const VectorField &v, int points_per_edge) {
  const LineRule g = gauss_legendre(points_per_edge);
  const auto &P = tri.vertices();
  double flux = 0.0;
  for (const auto &f : boundary_faces(tri)) {
    double s = 0.0;
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const Vec2 x = P[f.a] + g.points[q] * (P[f.b] - P[f.a]);
      s += g.weights[q] * dot(v(x), f.normal);
    }
    flux += s * f.length;
  }
  return flux;
}

int default_correction_face(const Triangulation &tri) {
  int best = -1;
  double best_len = 0.0;
  for (int e = 0; e < static_cast<int>(tri.n_edges()); ++e) {
    if (!tri.is_boundary_edge(e))
      continue;
    const double len = norm(tri.vertices()[tri.edges()[e][1]] - tri.vertices()[tri.edges()[e][0]]);
    // relative slack keeps equal-length edges of structured meshes tied
    if (best < 0 || len > best_len * (1.0 + 1e-12)) {
      best = e;
      best_len = len;
    }
  }
  if (best < 0)
    throw Error("default_correction_face: mesh has no boundary edge");
  return best;
}

FeFunction edge_bubble(const Triangulation &tri, int edge, std::shared_ptr<const FeSpace> vspace) {
  if (vspace->components() != 2 || !vspace->element().continuous())
    throw Error("edge_bubble: continuous vector space required");
  if (vspace->degree() < 2)
    throw UnsupportedError("edge_bubble: the quadratic bubble needs velocity degree >= 2");
  const BoundaryFace f = boundary_face(tri, edge);
  const int p = vspace->degree();
  const auto nodes = lattice(p);
  const int la = (f.local_edge + 1) % 3, lb = (f.local_edge + 2) % 3;
  FeFunction out(vspace);
  const auto cn = vspace->cell_nodes(f.triangle);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double b = (double(nodes[i][la]) / p) * (double(nodes[i][lb]) / p);
    out.coefficients[2 * cn[i]] = b * f.normal.x;
    out.coefficients[2 * cn[i] + 1] = b * f.normal.y;
  }
  return out;
}

FeFunction BoundaryData::lift() const {
  FeFunction fn(space);
  for (std::size_t i = 0; i < dofs.size(); ++i)
    fn.coefficients[dofs[i]] = values[i];
  return fn;
}

BoundaryData lagrange_boundary(std::shared_ptr<const FeSpace> vspace, const VectorField &g) {
  if (vspace->components() != 2)
    throw Error("lagrange_boundary: vector space required");
  BoundaryData bc;
  bc.space = vspace;
  bc.dofs = vspace->boundary_dofs();
  bc.values.resize(bc.dofs.size());
  const auto &X = vspace->node_coords();
  for (std::size_t i = 0; i < bc.dofs.size(); ++i) {
    const int d = bc.dofs[i];
    const Vec2 v = g(X[d / 2]);
    bc.values[i] = d % 2 == 0 ? v.x : v.y;
  }
  bc.flux = boundary_normal_flux(bc.lift());
  bc.interpolant_flux = bc.flux;
  return bc;
}

BoundaryData compatible_interpolate(std::shared_ptr<const FeSpace> vspace, const VectorField &g,
                                    int edge) {
  BoundaryData bc = lagrange_boundary(vspace, g);
  const Triangulation &tri = vspace->mesh();
  if (edge < 0)
    edge = default_correction_face(tri);
  const FeFunction bubble = edge_bubble(tri, edge, vspace);

  // integral of the scalar bubble over the face: (b_f n_f) . n_f = b_f
  const BoundaryFace f = boundary_face(tri, edge);
  const LineRule gl = gauss_legendre(vspace->degree() + 2);
  double bint = 0.0;
  for (std::size_t q = 0; q < gl.points.size(); ++q)
    bint += gl.weights[q] * dot(evaluate_vector(bubble, f.triangle, f.at(gl.points[q])), f.normal);
  bint *= f.length;

  const double cf = bc.interpolant_flux / bint;
  for (std::size_t i = 0; i < bc.dofs.size(); ++i)
    bc.values[i] -= cf * bubble.coefficients[bc.dofs[i]];
  bc.flux = boundary_normal_flux(bc.lift());
  bc.correction = FaceCorrection{edge, cf, bint};
  return bc;
}

const char *to_string(BcMode m) { return m == BcMode::lagrange ? "lagrange" : "compatible"; }

BcMode bc_mode_from_string(const std::string &s) {
  if (s == "lagrange")
    return BcMode::lagrange;
  if (s == "compatible")
    return BcMode::compatible;
  throw Error("unknown boundary mode '" + s + "'");
}

BoundaryData make_boundary_data(std::shared_ptr<const FeSpace> vspace, const VectorField &g,
                                BcMode mode) {
  return mode == BcMode::lagrange ? lagrange_boundary(vspace, g) : compatible_interpolate(vspace, g);
}

} // namespace svstokes
