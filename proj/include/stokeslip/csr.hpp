#pragma once

#include <string>
#include <vector>

namespace stokeslip {

// Compressed sparse row matrix with sorted, duplicate-free column indices per
// row. Built through CsrBuilder which merges duplicate triplets by summation.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  int rows() const { return static_cast<int>(row_offsets_.size()) - 1; }
  int cols() const { return cols_; }
  long nnz() const { return static_cast<long>(col_indices_.size()); }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;
  void multiply_transpose(const std::vector<double>& x, std::vector<double>& y) const;

  // Entry lookup by binary search; returns 0 for positions outside the
  // sparsity pattern.
  double coeff(int i, int j) const;

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  // Checks monotone offsets and sorted unique in-range columns; throws
  // std::logic_error on violation.
  void validate() const;

 private:
  friend class CsrBuilder;
  friend CsrMatrix read_matrix_market(const std::string& path);
  int cols_ = 0;
  std::vector<int> row_offsets_ = {0};
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

class CsrBuilder {
 public:
  CsrBuilder(int rows, int cols);
  void add(int i, int j, double v);
  // Adds every entry of other, offset to the (row0, col0) block, optionally
  // scaled and/or transposed.
  void add_block(const CsrMatrix& other, int row0, int col0, double scale = 1.0,
                 bool transpose = false);
  CsrMatrix build() const;

 private:
  struct Triplet {
    int i, j;
    double v;
  };
  int rows_, cols_;
  std::vector<Triplet> triplets_;
};

// Matrix Market coordinate/real/general exchange format, 1-based indices.
void write_matrix_market(const CsrMatrix& m, const std::string& path);
CsrMatrix read_matrix_market(const std::string& path);

}  // namespace stokeslip
