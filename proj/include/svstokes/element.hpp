#pragma once

#include "svstokes/common.hpp"

#include <string>
#include <vector>

namespace svstokes {

enum class Family {
  vector_continuous,   // continuous vector Lagrange
  scalar_continuous,   // continuous scalar Lagrange
  scalar_discontinuous // discontinuous scalar Lagrange
};

struct ElementKind {
  Family family = Family::scalar_continuous;
  int degree = 1;

  bool continuous() const { return family != Family::scalar_discontinuous; }
  int components() const { return family == Family::vector_continuous ? 2 : 1; }
  // Scalar basis functions per triangle, (p+1)(p+2)/2.
  int scalar_local_dim() const { return (degree + 1) * (degree + 2) / 2; }
  int local_dim() const { return components() * scalar_local_dim(); }

  friend bool operator==(const ElementKind &, const ElementKind &) = default;
};

// Throws UnsupportedError for degree < 1 on continuous families or < 0 otherwise.
void check_element(const ElementKind &e);

const char *to_string(Family f);
Family family_from_string(const std::string &s);

// Multi-index (a0, a1, a2), a0 + a1 + a2 = p, of a lattice node; the node sits
// at barycentric coordinates a / p.
using LatticeIndex = std::array<int, 3>;

// Lattice nodes of degree p in local order: the three vertices, then the p-1
// interior nodes of each edge (edge i is opposite vertex i and runs from
// vertex i+1 to vertex i+2), then the interior nodes. Degree 0 has a single
// node at the centroid.
std::vector<LatticeIndex> lattice(int p);
Barycentric lattice_point(const LatticeIndex &a, int p);

// Values and reference gradients (d/dx, d/dy with lambda_1 = x, lambda_2 = y)
// of the scalar nodal basis of degree p at a point.
struct BasisTabulation {
  std::vector<double> values;
  std::vector<Vec2> gradients;
};
BasisTabulation reference_basis(int p, const Barycentric &point);

// Scalar tabulation for an element kind. Vector kinds tabulate the scalar basis
// that each component shares.
inline BasisTabulation reference_basis(const ElementKind &e, const Barycentric &point) {
  return reference_basis(e.degree, point);
}

} // namespace svstokes
