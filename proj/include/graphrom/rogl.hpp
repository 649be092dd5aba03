#pragma once

#include <cstddef>
#include <vector>

#include "graphrom/dense.hpp"
#include "graphrom/lanczos.hpp"
#include "graphrom/rom.hpp"

namespace graphrom {

/// Block-tridiagonal form of the ROM: Q^T A12 Q = A, with Q E1 = V^T E1.
struct RomTridiagonal {
  BlockTridiagonal a_tilde;
  DenseMatrix a_dense;  // assembled a_tilde
  DenseMatrix q_tilde;  // n x n
  std::size_t deflation_events = 0;
};

struct RoglDiagnostics {
  double row_sum_residual = 0.0;  // max |L 1| / max |L|
  double min_eigenvalue_rel = 0.0;  // lambda_min(L) / |L|
  double diag_match_residual = 0.0;  // max |D_jj - D_{i_j}| / D_{i_j} over targets
  double assumption2_margin = 0.0;  // min |z0| / max |z0|
  double z0_consistency = -1.0;  // |z0 - Q^T Q12^T D^{1/2} 1| / |z0|, -1 when unavailable
  double nullspace_residual = 0.0;  // |A z0| / (|A| |z0|)
  std::vector<double> ghost_ratio;  // diag(L) ./ D
};

struct Rogl {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t m0 = 0;
  BlockTridiagonal a_tilde;
  DenseMatrix a_dense;
  DenseMatrix q_tilde;
  std::vector<double> z0;
  std::vector<double> d_tilde;
  DenseMatrix l_tilde;
  std::vector<std::size_t> reduced_target;  // 0 .. m-1
  std::vector<std::size_t> original_target;  // graph vertex for each reduced target
  RoglDiagnostics diagnostics;
};

struct OptimalGrid1D {
  std::vector<double> h;          // primary steps h_2 .. h_n
  std::vector<double> h_hat;      // dual steps h^_1 .. h^_n
  std::vector<double> sigma;      // primary coefficient values (all 1)
  std::vector<double> sigma_hat;  // dual coefficient values (all 1)
};

/// Third Lanczos pass on A12 from V^T E1 (tolerance 64 eps, full reorthogonalization).
RomTridiagonal tridiagonalize_rom(const RomState& rom);

/// z0 = Z c where Z = Q^T [0; I] spans the nullspace of the tridiagonal form (the exact
/// zero block of A12 maps to it) and E1^T Z c = sqrt(D_hat) in the least-squares sense. Throws AssumptionViolation(1) if the
/// coefficient system is singular and AssumptionViolation(2) if an entry of z0 vanishes.
std::vector<double> compute_z0(const RomTridiagonal& tri, const RomState& rom,
                               double assumption2_tol = 1e-12);

/// D = z0^2 and L = diag(z0) A diag(z0).
void scale_to_laplacian(const DenseMatrix& a_dense, const std::vector<double>& z0,
                        std::vector<double>& d_tilde, DenseMatrix& l_tilde);

/// Full transformation ROM -> reduced-order graph Laplacian.
Rogl build_rogl(const RomState& rom, double assumption2_tol = 1e-12);

struct ReducedComponents {
  std::vector<std::size_t> labels;
  std::size_t count = 0;
  /// |L 1_c| / |L| for each component c.
  std::vector<double> indicator_residuals;
};

/// Components of the reduced graph, with edges |L_ij| > coupling_tol * max |L|.
/// Residuals are measured on the full L, dropped couplings included.
ReducedComponents reduced_nullspace_indicators(const DenseMatrix& l_tilde,
                                               double coupling_tol = 1e-10);

/// Residual of the Laplace-domain identity between the tridiagonal form and the Ritz
/// expansion at lambda, relative to the size of either side.
double match_identity_residual(const Rogl& rogl, const RomState& rom, double lambda);

/// Steps of the staggered grid for a single-input ROGL (sigma = 1):
/// h_{i+1} = -1 / L_{i,i+1}, h^_i = D_ii. The first primary step does not enter L
/// under the Neumann closure, so h holds n - 1 values.
OptimalGrid1D extract_optimal_grid(const DenseMatrix& l_tilde, const std::vector<double>& d_tilde);

}  // namespace graphrom
