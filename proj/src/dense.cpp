#include "graphrom/dense.hpp"

#include <algorithm>
#include <cmath>

#include "graphrom/error.hpp"

namespace graphrom {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::unit_columns(std::size_t n, std::span<const std::size_t> columns) {
  DenseMatrix m(n, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= n) throw InvalidArgument("unit column index out of range");
    m(columns[j], j) = 1.0;
  }
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw InvalidArgument("column range out of bounds");
  DenseMatrix out(rows_, count);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(first * rows_), count * rows_,
              out.data_.begin());
  return out;
}

DenseMatrix DenseMatrix::row_block(std::size_t first, std::size_t count) const {
  return block(first, 0, count, cols_);
}

DenseMatrix DenseMatrix::block(std::size_t row, std::size_t col, std::size_t rows,
                               std::size_t cols) const {
  if (row + rows > rows_ || col + cols > cols_) throw InvalidArgument("block out of bounds");
  DenseMatrix out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) out(i, j) = (*this)(row + i, col + j);
  return out;
}

void DenseMatrix::set_block(std::size_t row, std::size_t col, const DenseMatrix& b) {
  if (row + b.rows() > rows_ || col + b.cols() > cols_)
    throw InvalidArgument("block out of bounds");
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < b.rows(); ++i) (*this)(row + i, col + j) = b(i, j);
}

double DenseMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double DenseMatrix::frobenius_norm() const noexcept { return norm2(data_); }

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw InvalidArgument("shape mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw InvalidArgument("shape mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("matmul: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj != 0.0) axpy(bkj, a.col(k), cj);
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidArgument("matmul_tn: row mismatch");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.col(i), b.col(j));
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw InvalidArgument("matmul_nt: column mismatch");
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t k = 0; k < a.cols(); ++k)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double bjk = b(j, k);
      if (bjk != 0.0) axpy(bjk, a.col(k), c.col(j));
    }
  return c;
}

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw InvalidArgument("matvec: size mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t k = 0; k < a.cols(); ++k)
    if (x[k] != 0.0) axpy(x[k], a.col(k), y);
  return y;
}

std::vector<double> matvec_t(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.rows()) throw InvalidArgument("matvec_t: size mismatch");
  std::vector<double> y(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) y[j] = dot(a.col(j), x);
  return y;
}

DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.empty() && a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw InvalidArgument("hcat: row mismatch");
  DenseMatrix c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

DenseMatrix symmetrized(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("symmetrized: matrix not square");
  DenseMatrix s(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

double orthonormality_error(const DenseMatrix& a) {
  DenseMatrix g = matmul_tn(a, a);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return g.max_abs();
}

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) noexcept {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace graphrom
