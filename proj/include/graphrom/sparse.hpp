#pragma once

#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "graphrom/dense.hpp"

namespace graphrom {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Column indices are sorted within each row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  /// Duplicate (row, col) triplets are summed.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
  static CsrMatrix from_dense(const DenseMatrix& m, double drop_below = 0.0);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const noexcept { return col_idx_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  /// Stored value at (i, j) or 0.
  double at(std::size_t i, std::size_t j) const noexcept;
  std::vector<double> diagonal() const;

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;
  DenseMatrix apply(const DenseMatrix& x) const;

  DenseMatrix to_dense() const;
  double max_abs() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace graphrom
