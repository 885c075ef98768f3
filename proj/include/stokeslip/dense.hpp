#pragma once

#include <vector>

#include "stokeslip/csr.hpp"

namespace stokeslip {

// Row-major dense matrix; sized for desk-scale direct factorizations.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  double at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

DenseMatrix to_dense(const CsrMatrix& m);

// LU factorization with partial pivoting. factor() throws SingularMatrix when
// a pivot magnitude falls below 1e-300.
class DenseLu {
 public:
  void factor(DenseMatrix a);
  std::vector<double> solve(const std::vector<double>& b) const;
  std::vector<double> solve_transpose(const std::vector<double>& b) const;
  int size() const { return lu_.rows(); }

 private:
  DenseMatrix lu_;
  std::vector<int> perm_;
};

// True when the symmetric matrix admits a Cholesky factorization, i.e. it is
// positive definite.
bool cholesky_succeeds(const DenseMatrix& a);

}  // namespace stokeslip
