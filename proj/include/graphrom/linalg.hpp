#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "graphrom/dense.hpp"

namespace graphrom {

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // orthonormal columns, vectors.col(i) pairs with values[i]
};

/// Dense symmetric eigendecomposition (Householder tridiagonalization + implicit QL).
/// The input is symmetrized; asymmetry above 1e-8 * max|M| is rejected.
EigenDecomposition sym_eig(const DenseMatrix& m);

struct SvdResult {
  DenseMatrix u;               // rows x cols, orthonormal columns
  std::vector<double> sigma;   // descending
  DenseMatrix w;               // cols x cols, orthogonal
};

/// Thin SVD M = U diag(sigma) W^T for rows >= cols (Householder QR, then one-sided
/// Jacobi on the triangular factor). Columns of U belonging to zero singular values are
/// completed to an orthonormal set.
SvdResult thin_svd(const DenseMatrix& m);

/// V f(Lambda) V^T X.
DenseMatrix spectral_apply(const EigenDecomposition& eig, const DenseMatrix& x,
                           const std::function<double(double)>& f);

/// V f(Lambda) V^T X with f(l) = 1/l for l > null_tol * l_max, 0 otherwise.
DenseMatrix pinv_apply(const EigenDecomposition& eig, const DenseMatrix& x,
                       double null_tol = 1e-10);

/// Pseudo-inverse that drops exactly the `null_count` lowest eigenpairs.
DenseMatrix pinv_apply_excluding(const EigenDecomposition& eig, const DenseMatrix& x,
                                 std::size_t null_count);

/// LU factorization with partial pivoting.
struct LuFactorization {
  DenseMatrix lu;
  std::vector<std::size_t> pivots;
  bool singular = false;
  /// min |u_kk| / max |u_kk|
  double pivot_ratio = 0.0;
};

LuFactorization lu_factor(const DenseMatrix& a);
/// Throws NumericalError when the factorization is singular.
DenseMatrix lu_solve(const LuFactorization& f, const DenseMatrix& b);

/// Orthonormal basis of range(M): left singular vectors with sigma > tol * sigma_max.
DenseMatrix orthonormal_range(const DenseMatrix& m, double tol);

}  // namespace graphrom
