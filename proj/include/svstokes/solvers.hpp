#pragma once

#include "svstokes/sparse.hpp"

#include <memory>

namespace svstokes {

// Sparse Cholesky factorization with a fill-reducing ordering. Immutable after
// construction; solve() may be called concurrently.
class SpdFactorization {
public:
  explicit SpdFactorization(const SparseMatrix &a);
  ~SpdFactorization();
  SpdFactorization(SpdFactorization &&) noexcept;
  SpdFactorization &operator=(SpdFactorization &&) noexcept;
  SpdFactorization(const SpdFactorization &) = delete;
  SpdFactorization &operator=(const SpdFactorization &) = delete;

  std::vector<double> solve(const std::vector<double> &b) const;
  std::size_t size() const { return n_; }
  // Reciprocal condition estimate from the factor diagonal.
  double rcond() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t n_ = 0;
};

// Throws DefinitenessError naming the offending (unpermuted) row.
SpdFactorization factor_spd(const SparseMatrix &a);
inline std::vector<double> solve(const SpdFactorization &f, const std::vector<double> &b) {
  return f.solve(b);
}

struct SaddleSolution {
  std::vector<double> u;
  std::vector<double> p;
  double lambda = 0.0; // multiplier of the mean constraint
  double rcond = 0.0;
};

struct SaddleOptions {
  // Below this reciprocal pivot ratio the system is reported singular.
  double singular_rcond = 1e-13;
};

// Solves [K B^T 0; B 0 m; 0 m^T 0] (u, p, lambda) = (f, g, 0) with an LU
// factorization of the full symmetric block matrix.
SaddleSolution solve_saddle(const SparseMatrix &K, const SparseMatrix &B,
                            const std::vector<double> &m, const std::vector<double> &f,
                            const std::vector<double> &g, const SaddleOptions &opt = {});

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  bool converged = false;
  double relative_residual = 0.0;
};

// Conjugate gradients, optionally with the diagonal as preconditioner.
CgResult cg_solve(const SparseMatrix &a, const std::vector<double> &b, double tol, int maxit,
                  bool jacobi = true, const std::vector<double> *x0 = nullptr);

} // namespace svstokes
