#include "graphrom/rogl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "graphrom/error.hpp"
#include "graphrom/graph.hpp"
#include "graphrom/linalg.hpp"

namespace graphrom {

RomTridiagonal tridiagonalize_rom(const RomState& rom) {
  const DenseMatrix& c = rom.e1v;
  const double err = orthonormality_error(c);
  if (err > 1e-10)
    throw InvalidArgument("stage three: V^T E1 is not orthonormal (error " + std::to_string(err) +
                          "); the D weighting of the ROM is inconsistent");
  const double eps = 64.0 * std::numeric_limits<double>::epsilon();
  const LanczosResult lr = deflated_block_lanczos(BlockOperator::from_dense(rom.a12), c, rom.n,
                                                  eps, ReorthPolicy::full());
  RomTridiagonal t;
  t.a_tilde = lr.t;
  t.a_dense = lr.t.assemble();
  t.q_tilde = lr.q.assemble();
  t.deflation_events = lr.deflation_events;
  return t;
}

std::vector<double> compute_z0(const RomTridiagonal& tri, const RomState& rom,
                               double assumption2_tol) {
  const std::size_t n = tri.a_dense.rows();
  const std::size_t m = rom.m;
  const std::size_t m0 = rom.m0;
  if (m0 == 0) throw AssumptionViolation(1, 0, "z0: the ROM has no nullspace block");
  // The null block of A12 sits in the last m0 coordinates, so Z = Q^T [0; I].
  if (rom.krylov_dim + m0 != n) throw InvalidArgument("z0: ROM dimensions are inconsistent");
  const DenseMatrix z = tri.q_tilde.row_block(rom.krylov_dim, m0).transpose();

  // Least squares over the m target rows: (Z_t^T Z_t) c = Z_t^T sqrt(D_hat).
  const DenseMatrix zt = z.row_block(0, m);
  DenseMatrix rhs(m, 1);
  for (std::size_t j = 0; j < m; ++j) rhs(j, 0) = std::sqrt(rom.d_hat[j]);
  const LuFactorization f = lu_factor(matmul_tn(zt, zt));
  if (f.singular || f.pivot_ratio < 1e-12)
    throw AssumptionViolation(1, 0,
                              "z0: target rows of the nullspace basis are rank deficient");
  const DenseMatrix coeff = lu_solve(f, matmul_tn(zt, rhs));
  std::vector<double> z0 = matvec(z, coeff.col(0));

  double zmax = 0.0;
  for (double v : z0) zmax = std::max(zmax, std::abs(v));
  for (std::size_t i = 0; i < n; ++i)
    if (!(std::abs(z0[i]) > assumption2_tol * zmax))
      throw AssumptionViolation(2, i,
                                "z0 entry " + std::to_string(i) + " vanishes (|z0_i| = " +
                                    std::to_string(std::abs(z0[i])) + ")");
  return z0;
}

void scale_to_laplacian(const DenseMatrix& a_dense, const std::vector<double>& z0,
                        std::vector<double>& d_tilde, DenseMatrix& l_tilde) {
  const std::size_t n = a_dense.rows();
  if (z0.size() != n) throw InvalidArgument("scale: z0 has the wrong length");
  for (std::size_t i = 0; i < n; ++i)
    if (z0[i] == 0.0) throw AssumptionViolation(2, i, "scale: z0 has a zero entry");
  d_tilde.resize(n);
  for (std::size_t i = 0; i < n; ++i) d_tilde[i] = z0[i] * z0[i];
  l_tilde = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) l_tilde(i, j) = z0[i] * a_dense(i, j) * z0[j];
  l_tilde = symmetrized(l_tilde);
}

namespace {

// Flips basis vector i: A -> S A S, Q -> Q S with S = diag(..., -1, ...).
void flip_basis_vector(RomTridiagonal& tri, std::size_t i) {
  const std::size_t n = tri.a_dense.rows();
  for (std::size_t k = 0; k < n; ++k) {
    tri.a_dense(i, k) = -tri.a_dense(i, k);
    tri.a_dense(k, i) = -tri.a_dense(k, i);
  }
  for (std::size_t k = 0; k < tri.q_tilde.rows(); ++k) tri.q_tilde(k, i) = -tri.q_tilde(k, i);
  auto& t = tri.a_tilde;
  std::size_t level = 0;
  while (t.offset(level) + t.block_sizes[level] <= i) ++level;
  const std::size_t local = i - t.offset(level);
  DenseMatrix& alpha = t.alphas[level];
  for (std::size_t k = 0; k < alpha.rows(); ++k) {
    alpha(local, k) = -alpha(local, k);
    alpha(k, local) = -alpha(k, local);
  }
  if (level < t.betas.size())
    for (std::size_t k = 0; k < t.betas[level].rows(); ++k)
      t.betas[level](k, local) = -t.betas[level](k, local);
  if (level > 0)
    for (std::size_t k = 0; k < t.betas[level - 1].cols(); ++k)
      t.betas[level - 1](local, k) = -t.betas[level - 1](local, k);
}

}  // namespace

Rogl build_rogl(const RomState& rom, double assumption2_tol) {
  RomTridiagonal tri = tridiagonalize_rom(rom);
  Rogl r;
  r.z0 = compute_z0(tri, rom, assumption2_tol);
  // Sign convention z0 > 0; the first m entries are already sqrt(D_hat).
  for (std::size_t i = 0; i < r.z0.size(); ++i)
    if (r.z0[i] < 0.0) {
      flip_basis_vector(tri, i);
      r.z0[i] = -r.z0[i];
    }
  r.n = tri.a_dense.rows();
  r.m = rom.m;
  r.m0 = rom.m0;
  scale_to_laplacian(tri.a_dense, r.z0, r.d_tilde, r.l_tilde);
  r.a_tilde = std::move(tri.a_tilde);
  r.a_dense = std::move(tri.a_dense);
  r.q_tilde = std::move(tri.q_tilde);
  for (std::size_t j = 0; j < r.m; ++j) r.reduced_target.push_back(j);
  r.original_target = rom.targets;

  auto& dg = r.diagnostics;
  const double lmax = r.l_tilde.max_abs();
  std::vector<double> ones(r.n, 1.0);
  const auto row_sums = matvec(r.l_tilde, ones);
  for (double s : row_sums) dg.row_sum_residual = std::max(dg.row_sum_residual, std::abs(s));
  if (lmax > 0.0) dg.row_sum_residual /= lmax;

  const EigenDecomposition le = sym_eig(r.l_tilde);
  const double lnorm = std::max(std::abs(le.values.front()), std::abs(le.values.back()));
  dg.min_eigenvalue_rel = lnorm > 0.0 ? le.values.front() / lnorm : 0.0;

  for (std::size_t j = 0; j < r.m; ++j)
    dg.diag_match_residual =
        std::max(dg.diag_match_residual, std::abs(r.d_tilde[j] - rom.d_hat[j]) / rom.d_hat[j]);

  double zmin = std::numeric_limits<double>::infinity(), zmax = 0.0;
  for (double v : r.z0) {
    zmin = std::min(zmin, std::abs(v));
    zmax = std::max(zmax, std::abs(v));
  }
  dg.assumption2_margin = zmax > 0.0 ? zmin / zmax : 0.0;

  if (!rom.q12t_sqrt_d_ones.empty() && r.q_tilde.rows() == rom.q12t_sqrt_d_ones.size()) {
    const auto direct = matvec_t(r.q_tilde, rom.q12t_sqrt_d_ones);
    double diff = 0.0;
    for (std::size_t i = 0; i < r.n; ++i) diff = std::max(diff, std::abs(direct[i] - r.z0[i]));
    dg.z0_consistency = zmax > 0.0 ? diff / zmax : diff;
  }

  const auto az = matvec(r.a_dense, r.z0);
  const double anorm = r.a_dense.max_abs();
  dg.nullspace_residual = (anorm > 0.0 && zmax > 0.0) ? norm2(az) / (anorm * norm2(r.z0)) : 0.0;

  dg.ghost_ratio.resize(r.n);
  for (std::size_t i = 0; i < r.n; ++i) dg.ghost_ratio[i] = r.l_tilde(i, i) / r.d_tilde[i];
  return r;
}

ReducedComponents reduced_nullspace_indicators(const DenseMatrix& l_tilde, double coupling_tol) {
  const double lmax = l_tilde.max_abs();
  ReducedComponents rc;
  rc.labels = connected_components(CsrMatrix::from_dense(l_tilde), coupling_tol * lmax);
  rc.count = component_count(rc.labels);
  rc.indicator_residuals.assign(rc.count, 0.0);
  for (std::size_t c = 0; c < rc.count; ++c) {
    std::vector<double> ind(l_tilde.rows(), 0.0);
    for (std::size_t i = 0; i < ind.size(); ++i)
      if (rc.labels[i] == c) ind[i] = 1.0;
    const auto r = matvec(l_tilde, ind);
    double worst = 0.0;
    for (double v : r) worst = std::max(worst, std::abs(v));
    rc.indicator_residuals[c] = lmax > 0.0 ? worst / lmax : worst;
  }
  return rc;
}

double match_identity_residual(const Rogl& rogl, const RomState& rom, double lambda) {
  const std::size_t n = rogl.n;
  const std::size_t m = rom.m;
  DenseMatrix shifted = rogl.a_dense;
  shifted *= -1.0;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) += lambda;
  DenseMatrix rhs(n, m);
  for (std::size_t j = 0; j < m; ++j) rhs(j, j) = std::sqrt(rom.d_hat[j]);
  const DenseMatrix x = lu_solve(lu_factor(shifted), rhs);
  const DenseMatrix lhs = matmul_tn(rhs, x);

  const DenseMatrix r = rom.residues();
  DenseMatrix sum(m, m);
  for (std::size_t j = 0; j < rom.n; ++j) {
    const double w = 1.0 / (lambda - rom.ritz_values[j]);
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t a = 0; a < m; ++a) sum(a, b) += w * r(a, j) * r(b, j);
  }
  const double scale = std::max(lhs.max_abs(), sum.max_abs());
  const double diff = (lhs - sum).max_abs();
  return scale > 0.0 ? diff / scale : diff;
}

OptimalGrid1D extract_optimal_grid(const DenseMatrix& l_tilde, const std::vector<double>& d_tilde) {
  const std::size_t n = l_tilde.rows();
  if (n == 0 || d_tilde.size() != n) throw InvalidArgument("optimal grid: size mismatch");
  const double lmax = l_tilde.max_abs();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 2; i < n; ++i)
      if (std::abs(l_tilde(i, j)) > 1e-10 * lmax)
        throw InvalidArgument("optimal grid: reduced Laplacian is not tridiagonal");
  OptimalGrid1D g;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double off = l_tilde(i, i + 1);
    if (off == 0.0 || std::abs(off) <= 1e-14 * lmax)
      throw InvalidArgument("optimal grid: chain decouples at node " + std::to_string(i + 1));
    g.h.push_back(-1.0 / off);
  }
  g.h_hat = d_tilde;
  g.sigma.assign(g.h.size(), 1.0);
  g.sigma_hat.assign(n, 1.0);
  return g;
}

}  // namespace graphrom
