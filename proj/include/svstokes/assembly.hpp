#pragma once

#include "svstokes/boundary.hpp"
#include "svstokes/sparse.hpp"

#include <span>

namespace svstokes {

// All assemblers visit cells in `cell_order` when given (a permutation of the
// triangle indices), otherwise in index order.

// nu * int grad psi_a : grad psi_b
SparseMatrix assemble_stiffness(const FeSpace &vspace, double nu, std::span<const int> cell_order = {});
// int div psi_a div psi_b
SparseMatrix assemble_graddiv(const FeSpace &vspace, std::span<const int> cell_order = {});
// B[q][a] = int chi_q div psi_a
SparseMatrix assemble_div_coupling(const FeSpace &vspace, const FeSpace &pspace,
                                   std::span<const int> cell_order = {});
SparseMatrix assemble_pressure_mass(const FeSpace &pspace, std::span<const int> cell_order = {});
// m[q] = int chi_q
std::vector<double> assemble_pressure_mean(const FeSpace &pspace);
// F[a] = int f . psi_a with a rule of degree 2k + 4.
std::vector<double> assemble_load(const FeSpace &vspace, const VectorField &f,
                                  std::span<const int> cell_order = {});

struct AssembledSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
  std::vector<int> constrained_dofs;
  FeFunction lift;
};

// Symmetric elimination: free rows get rhs - A lift, constrained rows and
// columns become identity with the prescribed value on the right.
AssembledSystem apply_dirichlet(const SparseMatrix &a, const std::vector<double> &rhs,
                                const BoundaryData &bc);

// Right-hand side part of apply_dirichlet alone.
std::vector<double> apply_dirichlet_rhs(const SparseMatrix &a, const std::vector<double> &rhs,
                                        const BoundaryData &bc);

// Drops the constrained velocity columns of B; returns the modified B and the
// pressure right-hand side -B lift.
std::pair<SparseMatrix, std::vector<double>> eliminate_coupling(const SparseMatrix &b,
                                                                const BoundaryData &bc);

} // namespace svstokes
