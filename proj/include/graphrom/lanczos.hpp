#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "graphrom/dense.hpp"
#include "graphrom/sparse.hpp"

namespace graphrom {

struct ReorthPolicy {
  enum class Kind { none, full, selective };
  Kind kind = Kind::full;
  /// For selective: reorthogonalize a step when max |Q^T r| exceeds threshold * |r|.
  double threshold = std::sqrt(std::numeric_limits<double>::epsilon());

  static ReorthPolicy none() { return {Kind::none, 0.0}; }
  static ReorthPolicy full() { return {Kind::full, 0.0}; }
  static ReorthPolicy selective(double t = std::sqrt(std::numeric_limits<double>::epsilon())) {
    return {Kind::selective, t};
  }
};

/// Symmetric linear operator acting on column blocks.
struct BlockOperator {
  std::size_t dim = 0;
  std::function<DenseMatrix(const DenseMatrix&)> apply;

  /// The matrix is captured by reference and must outlive the operator.
  static BlockOperator from_csr(const CsrMatrix& m);
  static BlockOperator from_dense(const DenseMatrix& m);
};

struct BlockTridiagonal {
  std::vector<DenseMatrix> alphas;  // alphas[j]: m_j x m_j, symmetric
  std::vector<DenseMatrix> betas;   // betas[j]: m_{j+1} x m_j, couples level j+1 to level j
  std::vector<std::size_t> block_sizes;

  std::size_t levels() const noexcept { return alphas.size(); }
  std::size_t total_dim() const noexcept;
  /// Offset of the first row of level j.
  std::size_t offset(std::size_t level) const;
  /// Dense symmetric matrix with alphas on the diagonal and betas / betas^T beside it.
  DenseMatrix assemble() const;
};

struct LanczosBasis {
  std::vector<DenseMatrix> q_blocks;

  std::size_t total_cols() const noexcept;
  DenseMatrix assemble() const;
};

struct LanczosResult {
  BlockTridiagonal t;
  LanczosBasis q;
  /// Steps where at least one direction was truncated.
  std::size_t deflation_events = 0;
  /// True when the process ended because a residual block vanished entirely.
  bool invariant_subspace = false;
  /// Residual block after the final step (dim x m_last); zero-width if the process deflated out.
  DenseMatrix final_residual;
};

/// Deflated block Lanczos started from the orthonormal block c.
///
/// Singular values of each residual block below eps * scale are dropped, with scale the
/// largest singular value of M c. Runs at most k steps and stops early when the residual
/// deflates completely or the basis fills the space. Columns of `locked` (orthonormal,
/// orthogonal to c) are projected out of every residual, which keeps an operator's known
/// nullspace from leaking back into the basis through rounding.
LanczosResult deflated_block_lanczos(const BlockOperator& m, const DenseMatrix& c, std::size_t k,
                                     double eps, ReorthPolicy reorth = ReorthPolicy::full(),
                                     const DenseMatrix& locked = DenseMatrix());

}  // namespace graphrom
