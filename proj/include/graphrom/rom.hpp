#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "graphrom/dense.hpp"
#include "graphrom/graph.hpp"
#include "graphrom/lanczos.hpp"
#include "graphrom/linalg.hpp"

namespace graphrom {

struct RomOptions {
  std::size_t k1 = 20;
  std::size_t k2 = 4;
  double eps = 1e-8;
  /// Eigenvalues of T1 at or below null_tol * lambda_max span the nullspace block.
  double null_tol = 1e-8;
  ReorthPolicy stage1_reorth = ReorthPolicy::selective();
  ReorthPolicy stage2_reorth = ReorthPolicy::full();
  /// Full Ritz vectors are kept only up to this many vertices.
  std::size_t max_full_vertices = 10000;
};

struct StageOne {
  LanczosResult lanczos;
  DenseMatrix q1;  // N x n1
  DenseMatrix t1;  // n1 x n1, assembled
  DenseMatrix e1;  // n1 x m, identity on the first m rows
  std::size_t n1 = 0;
};

struct NullspaceBlock {
  DenseMatrix z1;  // n1 x m0
  std::size_t m0 = 0;
  EigenDecomposition t1_eig;
};

struct StageTwo {
  LanczosResult lanczos;
  DenseMatrix q2;  // n1 x (n - m0)
  std::size_t krylov_dim = 0;
};

/// Reduced model in the coordinates of V = [Q2, Z1].
struct RomState {
  std::size_t n_vertices = 0;
  std::size_t n1 = 0;
  std::size_t m = 0;
  std::size_t m0 = 0;
  std::size_t n = 0;           // ROM order, krylov_dim + m0
  std::size_t krylov_dim = 0;  // dimension of the second Krylov subspace
  std::vector<std::size_t> targets;
  std::vector<double> d_hat;  // D at the targets

  DenseMatrix v;    // n1 x n
  DenseMatrix a12;  // n x n, null block exactly zero
  std::vector<double> ritz_values;  // ascending, first m0 exactly zero
  DenseMatrix ritz_coords;          // n x n, column j is s_j
  DenseMatrix e1v;                  // V^T E1, n x m
  DenseMatrix c_block;              // Q12^T D^{1/2} B = V^T E1 D_hat^{1/2}
  std::vector<double> q12t_sqrt_d_ones;  // Q12^T D^{1/2} 1, empty if not computed

  std::optional<DenseMatrix> q12;  // N x n when materialized
  std::vector<std::size_t> sampled_vertices;
  DenseMatrix sampled_q12_rows;  // rows e_q^T Q12 for sampled_vertices

  /// r_j = c_block^T s_j, as columns (m x n).
  DenseMatrix residues() const;
};

struct RomBuild {
  StageOne s1;
  NullspaceBlock null;
  StageTwo s2;
  RomState rom;
  std::vector<std::string> warnings;
};

StageOne stage_one(const CsrMatrix& a_sym, const TargetSubset& subset, std::size_t k1, double eps,
                   ReorthPolicy reorth = ReorthPolicy::selective());
NullspaceBlock nullspace_block(const DenseMatrix& t1, double tol = 1e-8);

/// Orthonormal range of Q1^T D^{1/2} 1_c over the connected components c that contain a
/// target, in order of first target. Exact graph nullspace vectors projected on the first
/// Krylov space; their target rows are proportional to sqrt(D_hat).
DenseMatrix projected_component_nullspace(const StageOne& s1, const NormalizedGraph& g,
                                          const TargetSubset& subset,
                                          const std::vector<std::size_t>& labels);
StageTwo stage_two(const StageOne& s1, const NullspaceBlock& null, std::size_t k2, double eps,
                   ReorthPolicy reorth = ReorthPolicy::full());
RomState assemble_rom(const StageOne& s1, const NullspaceBlock& null, const StageTwo& s2,
                      const NormalizedGraph& g, const TargetSubset& subset,
                      std::size_t max_full_vertices = 10000);

/// Stages one and two plus assembly. When m0 equals the number of connected components
/// that contain a target, Z1 is taken from projected_component_nullspace; otherwise the
/// eigenvectors of T1 are kept and a warning is issued.
RomBuild build_rom(const NormalizedGraph& g, const TargetSubset& subset, const RomOptions& opts);

/// Stores rows e_q^T Q12 for the given vertices so Ritz vectors can be sampled later.
void store_sampled_rows(RomState& rom, const StageOne& s1, const std::vector<std::size_t>& vertices);

/// Rows e_q^T w_j (j = 1..n) for the given vertices.
DenseMatrix ritz_vector_rows(const RomState& rom, const std::vector<std::size_t>& vertices);

struct TransferSamples {
  std::vector<std::size_t> p_values;
  std::vector<DenseMatrix> f;  // m x m each
  double tau_step = 1.0;
  std::vector<std::string> warnings;
};

/// F(p) = B^T D^{1/2} (I - tau A)^p D^{1/2} B by repeated application.
TransferSamples transfer_full(const NormalizedGraph& g, const TargetSubset& subset,
                              double tau_step, const std::vector<std::size_t>& p_values);
/// sum_j (1 - tau l_j)^p r_j r_j^T.
TransferSamples transfer_rom(const RomState& rom, double tau_step,
                             const std::vector<std::size_t>& p_values);

/// max |F - F_rom| / max |F| for each p.
std::vector<double> transfer_relative_errors(const TransferSamples& full,
                                             const TransferSamples& rom);

struct MomentReport {
  std::size_t checked_order = 0;  // moments i = 0 .. checked_order - 1
  bool deflated = false;
  std::vector<double> abs_err;
  std::vector<double> rel_err;  // abs_err / max |full moment|
};

/// Compares sum_{l>0} r r^T / l^{i+1} between the full graph (dense spectrum) and the ROM.
/// Without deflation i runs to 2 k2 - 1; otherwise to 2 floor((n - m0) / m) - 1.
MomentReport moment_check(const RomState& rom, const EigenDecomposition& full_eig,
                          std::size_t k2, double null_tol = 1e-10);

}  // namespace graphrom
