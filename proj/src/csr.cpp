#include "stokeslip/csr.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stokeslip/errors.hpp"

namespace stokeslip {

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(rows(), 0.0);
  for (int i = 0; i < rows(); ++i) {
    double acc = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      acc += values_[k] * x[col_indices_[k]];
    }
    y[i] = acc;
  }
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y;
  multiply(x, y);
  return y;
}

void CsrMatrix::multiply_transpose(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(cols(), 0.0);
  for (int i = 0; i < rows(); ++i) {
    const double xi = x[i];
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      y[col_indices_[k]] += values_[k] * xi;
    }
  }
}

double CsrMatrix::coeff(int i, int j) const {
  const auto begin = col_indices_.begin() + row_offsets_[i];
  const auto end = col_indices_.begin() + row_offsets_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[it - col_indices_.begin()];
}

void CsrMatrix::validate() const {
  if (row_offsets_.empty() || row_offsets_.front() != 0 ||
      row_offsets_.back() != static_cast<int>(col_indices_.size()) ||
      col_indices_.size() != values_.size()) {
    throw std::logic_error("csr: inconsistent array sizes");
  }
  for (int i = 0; i < rows(); ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1]) throw std::logic_error("csr: offsets not monotone");
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] < 0 || col_indices_[k] >= cols_) {
        throw std::logic_error("csr: column index out of range");
      }
      if (k > row_offsets_[i] && col_indices_[k - 1] >= col_indices_[k]) {
        throw std::logic_error("csr: columns not sorted strictly ascending");
      }
    }
  }
}

CsrBuilder::CsrBuilder(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("csr builder: negative dimensions");
}

void CsrBuilder::add(int i, int j, double v) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
    throw std::out_of_range("csr builder: index out of range");
  }
  triplets_.push_back({i, j, v});
}

void CsrBuilder::add_block(const CsrMatrix& other, int row0, int col0, double scale,
                           bool transpose) {
  for (int i = 0; i < other.rows(); ++i) {
    for (int k = other.row_offsets()[i]; k < other.row_offsets()[i + 1]; ++k) {
      const int j = other.col_indices()[k];
      const double v = scale * other.values()[k];
      if (transpose) {
        add(row0 + j, col0 + i, v);
      } else {
        add(row0 + i, col0 + j, v);
      }
    }
  }
}

CsrMatrix CsrBuilder::build() const {
  std::vector<Triplet> t = triplets_;
  // Stable: duplicates merge in insertion order, so entries mirrored across
  // the diagonal accumulate in the same order and symmetry is bit-exact.
  std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  CsrMatrix m;
  m.cols_ = cols_;
  m.row_offsets_.assign(rows_ + 1, 0);
  size_t k = 0;
  for (int i = 0; i < rows_; ++i) {
    while (k < t.size() && t[k].i == i) {
      double v = t[k].v;
      const int j = t[k].j;
      ++k;
      while (k < t.size() && t[k].i == i && t[k].j == j) {
        v += t[k].v;  // merge duplicates
        ++k;
      }
      m.col_indices_.push_back(j);
      m.values_.push_back(v);
    }
    m.row_offsets_[i + 1] = static_cast<int>(m.col_indices_.size());
  }
  return m;
}

void write_matrix_market(const CsrMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  char buf[64];
  for (int i = 0; i < m.rows(); ++i) {
    for (int k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i + 1, m.col_indices()[k] + 1,
                    m.values()[k]);
      out << buf;
    }
  }
  if (!out.flush()) throw std::ios_base::failure("failed writing " + path);
}

CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::string line;
  int ln = 0;
  if (!std::getline(in, line)) throw ParseError("empty matrix market file", 1);
  ++ln;
  if (line.rfind("%%MatrixMarket matrix coordinate real general", 0) != 0) {
    throw ParseError("unsupported matrix market header", ln);
  }
  int rows = 0, cols = 0;
  long nnz = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line[0] == '%') continue;
    std::istringstream h(line);
    if (!(h >> rows >> cols >> nnz)) throw ParseError("malformed size line", ln);
    break;
  }
  if (rows <= 0 || cols <= 0 || nnz < 0) throw ParseError("invalid matrix dimensions", ln);
  CsrBuilder builder(rows, cols);
  for (long e = 0; e < nnz; ++e) {
    if (!std::getline(in, line)) throw ParseError("unexpected end of matrix market file", ln);
    ++ln;
    std::istringstream row(line);
    int i = 0, j = 0;
    double v = 0.0;
    if (!(row >> i >> j >> v)) throw ParseError("malformed matrix entry", ln);
    if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("matrix entry out of range", ln);
    builder.add(i - 1, j - 1, v);
  }
  return builder.build();
}

}  // namespace stokeslip
