#include "svstokes/solvers.hpp"

#include <cholmod.h>
#include <umfpack.h>

#include <algorithm>

namespace svstokes {

namespace {

struct CholmodCommon {
  cholmod_common c;
  CholmodCommon() {
    cholmod_start(&c);
    c.print = 0;
    c.error_handler = nullptr;
  }
  ~CholmodCommon() { cholmod_finish(&c); }
  CholmodCommon(const CholmodCommon &) = delete;
  CholmodCommon &operator=(const CholmodCommon &) = delete;
};

} // namespace

struct SpdFactorization::Impl {
  CholmodCommon common;
  cholmod_factor *L = nullptr;
  ~Impl() {
    if (L)
      cholmod_free_factor(&L, &common.c);
  }
};

SpdFactorization::SpdFactorization(const SparseMatrix &a) : impl_(std::make_unique<Impl>()), n_(a.n_rows()) {
  if (a.n_rows() != a.n_cols())
    throw Error("factor_spd: matrix is not square");
  cholmod_common *cc = &impl_->common.c;

  // CSR of a symmetric matrix is its own CSC; stype 1 reads the upper part.
  cholmod_sparse *A = cholmod_allocate_sparse(n_, n_, a.nnz(), 1, 1, 1, CHOLMOD_REAL, cc);
  if (!A)
    throw Error("factor_spd: out of memory");
  std::copy(a.row_ptr().begin(), a.row_ptr().end(), static_cast<int *>(A->p));
  std::copy(a.col_idx().begin(), a.col_idx().end(), static_cast<int *>(A->i));
  std::copy(a.values().begin(), a.values().end(), static_cast<double *>(A->x));

  // LL^T in every case; the simplicial LDL^T would accept negative pivots
  cc->supernodal = CHOLMOD_SUPERNODAL;
  impl_->L = cholmod_analyze(A, cc);
  if (!impl_->L) {
    cholmod_free_sparse(&A, cc);
    throw Error("factor_spd: symbolic analysis failed");
  }
  cholmod_factorize(A, impl_->L, cc);
  cholmod_free_sparse(&A, cc);
  if (cc->status == CHOLMOD_NOT_POSDEF || impl_->L->minor < n_) {
    const long k = long(impl_->L->minor);
    const long row = k < long(n_) ? static_cast<const int *>(impl_->L->Perm)[k] : k;
    throw DefinitenessError(row, "factor_spd: matrix is not positive definite (pivot at row " +
                                     std::to_string(row) + ")");
  }
  if (cc->status < CHOLMOD_OK)
    throw Error("factor_spd: numeric factorization failed");
}

SpdFactorization::~SpdFactorization() = default;
SpdFactorization::SpdFactorization(SpdFactorization &&) noexcept = default;
SpdFactorization &SpdFactorization::operator=(SpdFactorization &&) noexcept = default;

std::vector<double> SpdFactorization::solve(const std::vector<double> &b) const {
  if (b.size() != n_)
    throw Error("factor_spd: right-hand side has wrong size");
  if (n_ == 0)
    return {};
  CholmodCommon local;
  cholmod_dense *B = cholmod_allocate_dense(n_, 1, n_, CHOLMOD_REAL, &local.c);
  std::copy(b.begin(), b.end(), static_cast<double *>(B->x));
  cholmod_dense *X = cholmod_solve(CHOLMOD_A, impl_->L, B, &local.c);
  cholmod_free_dense(&B, &local.c);
  if (!X)
    throw Error("factor_spd: solve failed");
  const double *x = static_cast<const double *>(X->x);
  std::vector<double> out(x, x + n_);
  cholmod_free_dense(&X, &local.c);
  return out;
}

double SpdFactorization::rcond() const {
  CholmodCommon local;
  return cholmod_rcond(impl_->L, &local.c);
}

SpdFactorization factor_spd(const SparseMatrix &a) { return SpdFactorization(a); }

SaddleSolution solve_saddle(const SparseMatrix &K, const SparseMatrix &B, const std::vector<double> &m,
                            const std::vector<double> &f, const std::vector<double> &g,
                            const SaddleOptions &opt) {
  const std::size_t nu = K.n_rows(), np = B.n_rows();
  if (K.n_cols() != nu || B.n_cols() != nu || m.size() != np || f.size() != nu || g.size() != np)
    throw Error("solve_saddle: dimension mismatch");
  const std::size_t n = nu + np + 1;

  TripletBuilder tb(n, n);
  tb.reserve(K.nnz() + 2 * B.nnz() + 2 * np);
  for (std::size_t r = 0; r < nu; ++r)
    for (int k = K.row_ptr()[r]; k < K.row_ptr()[r + 1]; ++k)
      tb.add(int(r), K.col_idx()[k], K.values()[k]);
  for (std::size_t r = 0; r < np; ++r)
    for (int k = B.row_ptr()[r]; k < B.row_ptr()[r + 1]; ++k) {
      tb.add(int(nu + r), B.col_idx()[k], B.values()[k]);
      tb.add(B.col_idx()[k], int(nu + r), B.values()[k]);
    }
  for (std::size_t r = 0; r < np; ++r) {
    tb.add(int(nu + r), int(n - 1), m[r]);
    tb.add(int(n - 1), int(nu + r), m[r]);
  }
  const SparseMatrix A = tb.build();

  std::vector<double> rhs(n, 0.0);
  std::copy(f.begin(), f.end(), rhs.begin());
  std::copy(g.begin(), g.end(), rhs.begin() + nu);
  std::vector<double> x(n, 0.0);

  double control[UMFPACK_CONTROL], info[UMFPACK_INFO];
  umfpack_di_defaults(control);
  control[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
  // nested dissection gives about half the fill of AMD on these systems
  control[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;

  // The CSR arrays of A are the CSC arrays of A^T, hence UMFPACK_At below.
  const int *Ap = A.row_ptr().data(), *Ai = A.col_idx().data();
  const double *Ax = A.values().data();
  void *symbolic = nullptr, *numeric = nullptr;
  int status = umfpack_di_symbolic(int(n), int(n), Ap, Ai, Ax, &symbolic, control, info);
  if (status != UMFPACK_OK)
    throw Error("solve_saddle: symbolic analysis failed (status " + std::to_string(status) + ")");
  status = umfpack_di_numeric(Ap, Ai, Ax, symbolic, &numeric, control, info);
  umfpack_di_free_symbolic(&symbolic);
  const double rcond = info[UMFPACK_RCOND];
  if (status == UMFPACK_WARNING_singular_matrix || (status == UMFPACK_OK && !(rcond >= opt.singular_rcond))) {
    umfpack_di_free_numeric(&numeric);
    throw SingularSystemError("solve_saddle: saddle-point system is singular (rcond estimate " +
                              std::to_string(rcond) + ")");
  }
  if (status != UMFPACK_OK) {
    umfpack_di_free_numeric(&numeric);
    throw Error("solve_saddle: numeric factorization failed (status " + std::to_string(status) + ")");
  }
  status = umfpack_di_solve(UMFPACK_At, Ap, Ai, Ax, x.data(), rhs.data(), numeric, control, info);
  umfpack_di_free_numeric(&numeric);
  if (status != UMFPACK_OK)
    throw Error("solve_saddle: solve failed (status " + std::to_string(status) + ")");

  SaddleSolution s;
  s.u.assign(x.begin(), x.begin() + nu);
  s.p.assign(x.begin() + nu, x.begin() + nu + np);
  s.lambda = x[n - 1];
  s.rcond = rcond;
  return s;
}

CgResult cg_solve(const SparseMatrix &a, const std::vector<double> &b, double tol, int maxit, bool jacobi,
                  const std::vector<double> *x0) {
  const std::size_t n = b.size();
  if (a.n_rows() != n || a.n_cols() != n)
    throw Error("cg_solve: dimension mismatch");
  CgResult res;
  res.x = x0 ? *x0 : std::vector<double>(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    res.x.assign(n, 0.0);
    res.converged = true;
    return res;
  }
  std::vector<double> dinv(n, 1.0);
  if (jacobi) {
    const auto d = a.diagonal();
    for (std::size_t i = 0; i < n; ++i)
      dinv[i] = d[i] > 0.0 ? 1.0 / d[i] : 1.0;
  }
  std::vector<double> r = b;
  a.multiply_add(res.x, r, -1.0);
  std::vector<double> z(n), p(n), q(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = dinv[i] * r[i];
  p = z;
  double rz = dot(r, z);
  double rnorm = norm2(r);
  while (rnorm > tol * bnorm && res.iterations < maxit) {
    q.assign(n, 0.0);
    a.multiply_add(p, q);
    const double alpha = rz / dot(p, q);
    for (std::size_t i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
      z[i] = dinv[i] * r[i];
    }
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
    rnorm = norm2(r);
    ++res.iterations;
  }
  res.relative_residual = rnorm / bnorm;
  res.converged = rnorm <= tol * bnorm;
  return res;
}

} // namespace svstokes
