#pragma once

#include "svstokes/common.hpp"

#include <iosfwd>
#include <vector>

namespace svstokes {

struct Triplet {
  int row;
  int col;
  double value;
};

// Compressed sparse row matrix. Column indices are strictly ascending within
// each row and explicit zeros are dropped when built from triplets.
class SparseMatrix {
public:
  SparseMatrix() : row_ptr_(1, 0) {}
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  // Duplicates are summed in insertion order.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t);
  static SparseMatrix identity(std::size_t n);

  std::size_t n_rows() const { return rows_; }
  std::size_t n_cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<int> &row_ptr() const { return row_ptr_; }
  const std::vector<int> &col_idx() const { return col_idx_; }
  const std::vector<double> &values() const { return values_; }
  std::vector<double> &values() { return values_; }

  double at(int i, int j) const;
  std::vector<double> multiply(const std::vector<double> &x) const;
  // y += alpha A x
  void multiply_add(const std::vector<double> &x, std::vector<double> &y, double alpha = 1.0) const;
  std::vector<double> multiply_transpose(const std::vector<double> &x) const;
  double quadratic_form(const std::vector<double> &x) const;

  SparseMatrix transpose() const;
  // alpha * this + beta * other
  SparseMatrix combine(double alpha, const SparseMatrix &other, double beta) const;
  SparseMatrix scaled(double s) const;
  std::vector<double> diagonal() const;

  double norm_inf() const;
  // max |a_ij - a_ji| / max |a_ij|
  double asymmetry() const;

  void write_matrix_market(std::ostream &out) const;

  friend bool operator==(const SparseMatrix &, const SparseMatrix &) = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

class TripletBuilder {
public:
  TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  void reserve(std::size_t n) { t_.reserve(n); }
  void add(int i, int j, double v) { t_.push_back({i, j, v}); }
  SparseMatrix build() { return SparseMatrix::from_triplets(rows_, cols_, std::move(t_)); }

private:
  std::size_t rows_, cols_;
  std::vector<Triplet> t_;
};

SparseMatrix read_matrix_market(std::istream &in);

double norm_inf(const std::vector<double> &v);
double norm2(const std::vector<double> &v);
double dot(const std::vector<double> &a, const std::vector<double> &b);

} // namespace svstokes
