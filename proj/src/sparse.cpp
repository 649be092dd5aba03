#include "graphrom/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "graphrom/error.hpp"
#include "graphrom/parallel.hpp"

namespace graphrom {

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row >= rows || t.col >= cols) throw InvalidArgument("triplet index out of range");
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    if (!m.col_idx_.empty() && k > 0 && triplets[k - 1].row == t.row &&
        triplets[k - 1].col == t.col) {
      m.values_.back() += t.value;
      continue;
    }
    m.col_idx_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.row_ptr_[t.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& d, double drop_below) {
  CsrMatrix m;
  m.rows_ = d.rows();
  m.cols_ = d.cols();
  m.row_ptr_.assign(d.rows() + 1, 0);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      const double v = d(i, j);
      if (v == 0.0 || (i != j && std::abs(v) < drop_below)) continue;
      m.col_idx_.push_back(j);
      m.values_.push_back(v);
    }
    m.row_ptr_[i + 1] = m.col_idx_.size();
  }
  return m;
}

double CsrMatrix::at(std::size_t i, std::size_t j) const noexcept {
  if (i >= rows_) return 0.0;
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

void CsrMatrix::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) throw InvalidArgument("csr apply: size mismatch");
  // Each row is reduced sequentially, so the result does not depend on the thread count.
  parallel_for(rows_, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  });
}

std::vector<double> CsrMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  apply(x, y);
  return y;
}

DenseMatrix CsrMatrix::apply(const DenseMatrix& x) const {
  if (x.rows() != cols_) throw InvalidArgument("csr apply: block size mismatch");
  DenseMatrix y(rows_, x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) apply(x.col(j), y.col(j));
  return y;
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  return d;
}

double CsrMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace graphrom
