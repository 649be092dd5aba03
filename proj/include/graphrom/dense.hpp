#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace graphrom {

/// Column-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);
  /// Columns of the n x n identity selected by `columns`.
  static DenseMatrix unit_columns(std::size_t n, std::span<const std::size_t> columns);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  std::vector<double>& storage() noexcept { return data_; }
  const std::vector<double>& storage() const noexcept { return data_; }

  DenseMatrix transpose() const;
  /// Copy of columns [first, first + count).
  DenseMatrix columns(std::size_t first, std::size_t count) const;
  /// Copy of rows [first, first + count).
  DenseMatrix row_block(std::size_t first, std::size_t count) const;
  void set_block(std::size_t row, std::size_t col, const DenseMatrix& block);
  DenseMatrix block(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols) const;

  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;
  bool all_finite() const noexcept;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s) noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);

/// a * b
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a^T * b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a * b^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x);
std::vector<double> matvec_t(const DenseMatrix& a, std::span<const double> x);

/// [a, b]
DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b);
/// (a + a^T) / 2
DenseMatrix symmetrized(const DenseMatrix& a);
/// max |a^T a - I|
double orthonormality_error(const DenseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y) noexcept;
double norm2(std::span<const double> x) noexcept;
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;

}  // namespace graphrom
