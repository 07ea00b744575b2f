#include "svstokes/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace svstokes {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t) {
  for (const auto &e : t)
    if (e.row < 0 || e.col < 0 || std::size_t(e.row) >= rows || std::size_t(e.col) >= cols)
      throw Error("sparse: triplet index out of range");
  std::stable_sort(t.begin(), t.end(), [](const Triplet &a, const Triplet &b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  m.col_idx_.reserve(t.size());
  m.values_.reserve(t.size());
  std::size_t i = 0;
  while (i < t.size()) {
    std::size_t j = i;
    double s = 0.0;
    while (j < t.size() && t[j].row == t[i].row && t[j].col == t[i].col)
      s += t[j++].value;
    if (s != 0.0) {
      m.col_idx_.push_back(t[i].col);
      m.values_.push_back(s);
      ++m.row_ptr_[t[i].row + 1];
    }
    i = j;
  }
  for (std::size_t r = 0; r < rows; ++r)
    m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  m.col_idx_.resize(n);
  m.values_.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    m.col_idx_[i] = int(i);
    m.row_ptr_[i + 1] = int(i + 1);
  }
  return m;
}

double SparseMatrix::at(int i, int j) const {
  const auto b = col_idx_.begin() + row_ptr_[i], e = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(b, e, j);
  return it != e && *it == j ? values_[it - col_idx_.begin()] : 0.0;
}

void SparseMatrix::multiply_add(const std::vector<double> &x, std::vector<double> &y, double alpha) const {
  if (x.size() != cols_ || y.size() != rows_)
    throw Error("sparse: dimension mismatch in multiply");
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      s += values_[k] * x[col_idx_[k]];
    y[r] += alpha * s;
  }
}

std::vector<double> SparseMatrix::multiply(const std::vector<double> &x) const {
  std::vector<double> y(rows_, 0.0);
  multiply_add(x, y);
  return y;
}

std::vector<double> SparseMatrix::multiply_transpose(const std::vector<double> &x) const {
  if (x.size() != rows_)
    throw Error("sparse: dimension mismatch in transpose multiply");
  std::vector<double> y(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      y[col_idx_[k]] += values_[k] * x[r];
  return y;
}

double SparseMatrix::quadratic_form(const std::vector<double> &x) const { return dot(x, multiply(x)); }

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  t.col_idx_.resize(nnz());
  t.values_.resize(nnz());
  for (int c : col_idx_)
    ++t.row_ptr_[c + 1];
  for (std::size_t c = 0; c < cols_; ++c)
    t.row_ptr_[c + 1] += t.row_ptr_[c];
  std::vector<int> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int pos = next[col_idx_[k]]++;
      t.col_idx_[pos] = int(r);
      t.values_[pos] = values_[k];
    }
  return t;
}

SparseMatrix SparseMatrix::combine(double alpha, const SparseMatrix &o, double beta) const {
  if (o.rows_ != rows_ || o.cols_ != cols_)
    throw Error("sparse: dimension mismatch in combine");
  SparseMatrix m(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    int a = row_ptr_[r], ae = row_ptr_[r + 1];
    int b = o.row_ptr_[r], be = o.row_ptr_[r + 1];
    while (a < ae || b < be) {
      int c;
      double v;
      if (b >= be || (a < ae && col_idx_[a] < o.col_idx_[b])) {
        c = col_idx_[a];
        v = alpha * values_[a++];
      } else if (a >= ae || o.col_idx_[b] < col_idx_[a]) {
        c = o.col_idx_[b];
        v = beta * o.values_[b++];
      } else {
        c = col_idx_[a];
        v = alpha * values_[a++] + beta * o.values_[b++];
      }
      if (v != 0.0) {
        m.col_idx_.push_back(c);
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[r + 1] = int(m.values_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::scaled(double s) const {
  if (s == 0.0)
    return SparseMatrix(rows_, cols_);
  SparseMatrix m = *this;
  for (double &v : m.values_)
    v *= s;
  return m;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_));
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = at(int(i), int(i));
  return d;
}

double SparseMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      s += std::abs(values_[k]);
    m = std::max(m, s);
  }
  return m;
}

double SparseMatrix::asymmetry() const {
  if (rows_ != cols_)
    throw Error("sparse: asymmetry of a rectangular matrix");
  double scale = 0.0, diff = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      scale = std::max(scale, std::abs(values_[k]));
      diff = std::max(diff, std::abs(values_[k] - at(col_idx_[k], int(r))));
    }
  return scale > 0.0 ? diff / scale : 0.0;
}

void SparseMatrix::write_matrix_market(std::ostream &out) const {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
  char buf[64];
  for (std::size_t r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", values_[k]);
      out << r + 1 << ' ' << col_idx_[k] + 1 << ' ' << buf << '\n';
    }
}

SparseMatrix read_matrix_market(std::istream &in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket matrix coordinate real general", 0) != 0)
    throw ParseError(1, "expected a real general coordinate Matrix Market header");
  ++lineno;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] != '%')
      break;
  }
  std::istringstream hdr(line);
  std::size_t rows, cols, nnz;
  if (!(hdr >> rows >> cols >> nnz))
    throw ParseError(lineno, "bad size line");
  TripletBuilder b(rows, cols);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!std::getline(in, line))
      throw ParseError(lineno, "unexpected end of file");
    ++lineno;
    std::istringstream ls(line);
    long i, j;
    double v;
    if (!(ls >> i >> j >> v) || i < 1 || j < 1 || std::size_t(i) > rows || std::size_t(j) > cols)
      throw ParseError(lineno, "bad entry");
    b.add(int(i - 1), int(j - 1), v);
  }
  return b.build();
}

double norm_inf(const std::vector<double> &v) {
  double m = 0.0;
  for (double x : v)
    m = std::max(m, std::abs(x));
  return m;
}

double dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double> &v) { return std::sqrt(dot(v, v)); }

} // namespace svstokes
