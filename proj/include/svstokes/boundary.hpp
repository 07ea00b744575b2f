#pragma once

#include "svstokes/fespace.hpp"

#include <optional>

namespace svstokes {

// A boundary edge seen from its triangle: the edge runs from a to b in the
// triangle's counterclockwise order, so (b - a) rotated clockwise is the
// outward normal.
struct BoundaryFace {
  int edge = -1;      // index into Triangulation::edges()
  int triangle = -1;
  int local_edge = -1; // edge opposite this local vertex
  int a = -1, b = -1;
  Vec2 normal;         // outward unit normal
  double length = 0.0;

  // Barycentric coordinates in `triangle` of the point a + s (b - a).
  Barycentric at(double s) const;
};

BoundaryFace boundary_face(const Triangulation &tri, int edge);
// All topological boundary edges in ascending edge order.
std::vector<BoundaryFace> boundary_faces(const Triangulation &tri);

// Sum over boundary edges of Gauss quadrature of v . n. The function version
// uses degree + 2 points per edge.
double boundary_normal_flux(const FeFunction &v);
double boundary_normal_flux(const Triangulation &tri, const VectorField &v, int points_per_edge);

// Longest boundary edge; ties go to the lowest edge index.
int default_correction_face(const Triangulation &tri);

// Quadratic edge bubble lambda_a lambda_b of the boundary edge times its
// outward normal, represented in the (degree >= 2) vector space. Throws for
// interior edges.
FeFunction edge_bubble(const Triangulation &tri, int edge, std::shared_ptr<const FeSpace> vspace);

struct FaceCorrection {
  int edge = -1;
  double coefficient = 0.0; // c_f
  double bubble_integral = 0.0;
};

// Prescribed Dirichlet values on the boundary dofs of a vector space.
struct BoundaryData {
  std::shared_ptr<const FeSpace> space;
  std::vector<int> dofs;      // equals space->boundary_dofs()
  std::vector<double> values; // parallel to dofs
  double flux = 0.0;          // flux of the stored trace
  double interpolant_flux = 0.0; // flux of the plain Lagrange interpolant
  std::optional<FaceCorrection> correction;

  // g_h extended by zero to the interior dofs.
  FeFunction lift() const;
};

BoundaryData lagrange_boundary(std::shared_ptr<const FeSpace> vspace, const VectorField &g);

// Lagrange data corrected by c_f b_f n_f on one boundary edge so that the
// discrete trace has zero net flux. edge < 0 selects default_correction_face.
BoundaryData compatible_interpolate(std::shared_ptr<const FeSpace> vspace, const VectorField &g,
                                    int edge = -1);

enum class BcMode { lagrange, compatible };
const char *to_string(BcMode m);
BcMode bc_mode_from_string(const std::string &s);

BoundaryData make_boundary_data(std::shared_ptr<const FeSpace> vspace, const VectorField &g,
                                BcMode mode);

} // namespace svstokes
