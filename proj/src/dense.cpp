#include "stokeslip/dense.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stokeslip/errors.hpp"

namespace stokeslip {

DenseMatrix to_dense(const CsrMatrix& m) {
  DenseMatrix d(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k) {
      d.at(i, m.col_indices()[k]) += m.values()[k];
    }
  }
  return d;
}

void DenseLu::factor(DenseMatrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("dense lu: matrix must be square");
  const int n = a.rows();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), 0);
  for (int k = 0; k < n; ++k) {
    int pivot_row = k;
    double pivot = std::abs(a.at(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a.at(i, k)) > pivot) {
        pivot = std::abs(a.at(i, k));
        pivot_row = i;
      }
    }
    if (!(pivot > 1e-300)) throw SingularMatrix("dense lu: negligible pivot");
    if (pivot_row != k) {
      for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(pivot_row, j));
      std::swap(perm_[k], perm_[pivot_row]);
    }
    const double inv = 1.0 / a.at(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double l = a.at(i, k) * inv;
      a.at(i, k) = l;
      if (l == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a.at(i, j) -= l * a.at(k, j);
    }
  }
  lu_ = std::move(a);
}

std::vector<double> DenseLu::solve(const std::vector<double>& b) const {
  const int n = size();
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (int i = 1; i < n; ++i) {
    double acc = x[i];
    for (int j = 0; j < i; ++j) acc -= lu_.at(i, j) * x[j];
    x[i] = acc;
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[i];
    for (int j = i + 1; j < n; ++j) acc -= lu_.at(i, j) * x[j];
    x[i] = acc / lu_.at(i, i);
  }
  return x;
}

std::vector<double> DenseLu::solve_transpose(const std::vector<double>& b) const {
  // PA = LU gives A^T x = b <=> U^T z = b, L^T w = z, x = P^T w.
  const int n = size();
  std::vector<double> w = b;
  for (int i = 0; i < n; ++i) {
    double acc = w[i];
    for (int j = 0; j < i; ++j) acc -= lu_.at(j, i) * w[j];
    w[i] = acc / lu_.at(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = w[i];
    for (int j = i + 1; j < n; ++j) acc -= lu_.at(j, i) * w[j];
    w[i] = acc;
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[perm_[i]] = w[i];
  return x;
}

bool cholesky_succeeds(const DenseMatrix& a) {
  if (a.rows() != a.cols()) return false;
  const int n = a.rows();
  DenseMatrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a.at(j, j);
    for (int k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    l.at(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double v = a.at(i, j);
      for (int k = 0; k < j; ++k) v -= l.at(i, k) * l.at(j, k);
      l.at(i, j) = v / ljj;
    }
  }
  return true;
}

}  // namespace stokeslip
