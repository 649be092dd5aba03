#include "graphrom/rom.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "graphrom/error.hpp"

namespace graphrom {

DenseMatrix RomState::residues() const { return matmul_tn(c_block, ritz_coords); }

StageOne stage_one(const CsrMatrix& a_sym, const TargetSubset& subset, std::size_t k1, double eps,
                   ReorthPolicy reorth) {
  const std::size_t n = a_sym.rows();
  subset.validate(n);
  if (k1 == 0) throw InvalidArgument("stage one: k1 must be positive");
  StageOne s;
  const DenseMatrix b = DenseMatrix::unit_columns(n, subset.indices);
  s.lanczos = deflated_block_lanczos(BlockOperator::from_csr(a_sym), b, k1, eps, reorth);
  s.q1 = s.lanczos.q.assemble();
  s.t1 = s.lanczos.t.assemble();
  s.n1 = s.q1.cols();
  s.e1 = DenseMatrix(s.n1, subset.m());
  for (std::size_t j = 0; j < subset.m(); ++j) s.e1(j, j) = 1.0;
  return s;
}

NullspaceBlock nullspace_block(const DenseMatrix& t1, double tol) {
  NullspaceBlock nb;
  nb.t1_eig = sym_eig(t1);
  const auto& vals = nb.t1_eig.values;
  const double lmax = vals.empty() ? 0.0 : std::max(std::abs(vals.front()), std::abs(vals.back()));
  while (nb.m0 < vals.size() && vals[nb.m0] <= tol * lmax) ++nb.m0;
  nb.z1 = nb.t1_eig.vectors.columns(0, nb.m0);
  return nb;
}

DenseMatrix projected_component_nullspace(const StageOne& s1, const NormalizedGraph& g,
                                          const TargetSubset& subset,
                                          const std::vector<std::size_t>& labels) {
  const std::size_t n = g.a_sym.rows();
  if (labels.size() != n) throw InvalidArgument("component labels have the wrong length");
  std::vector<std::size_t> comps;
  for (std::size_t i : subset.indices)
    if (std::find(comps.begin(), comps.end(), labels[i]) == comps.end()) comps.push_back(labels[i]);
  DenseMatrix x(n, comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::size_t i = 0; i < n; ++i)
      if (labels[i] == comps[c]) x(i, c) = std::sqrt(g.norm.d[i]);
  return orthonormal_range(matmul_tn(s1.q1, x), 1e-8);
}

namespace {

DenseMatrix project_out_z(const DenseMatrix& z, DenseMatrix x) {
  if (z.cols() == 0) return x;
  x -= matmul(z, matmul_tn(z, x));
  return x;
}

}  // namespace

StageTwo stage_two(const StageOne& s1, const NullspaceBlock& null, std::size_t k2, double eps,
                   ReorthPolicy reorth) {
  if (k2 == 0) throw InvalidArgument("stage two: k2 must be positive");
  const DenseMatrix& z1 = null.z1;
  DenseMatrix start = project_out_z(z1, s1.e1);
  start = project_out_z(z1, std::move(start));
  const DenseMatrix c = orthonormal_range(start, 1e-8);
  if (c.cols() == 0)
    throw InvalidArgument("stage two: targets only excite the nullspace; start block has rank 0");

  const EigenDecomposition& eig = null.t1_eig;
  const std::size_t m0 = null.m0;
  // Pseudo-inverse of T1 on the complement of Z1, re-projected against Z1 on both sides.
  BlockOperator op{s1.n1, [&eig, &z1, m0](const DenseMatrix& x) {
                     DenseMatrix y = project_out_z(z1, x);
                     DenseMatrix coeff = matmul_tn(eig.vectors, y);
                     for (std::size_t i = 0; i < coeff.rows(); ++i) {
                       const double f = i < m0 ? 0.0 : 1.0 / eig.values[i];
                       for (std::size_t j = 0; j < coeff.cols(); ++j) coeff(i, j) *= f;
                     }
                     return project_out_z(z1, matmul(eig.vectors, coeff));
                   }};
  StageTwo s;
  s.lanczos = deflated_block_lanczos(op, c, k2, eps, reorth, z1);
  s.q2 = s.lanczos.q.assemble();
  s.krylov_dim = s.q2.cols();
  return s;
}

RomState assemble_rom(const StageOne& s1, const NullspaceBlock& null, const StageTwo& s2,
                      const NormalizedGraph& g, const TargetSubset& subset,
                      std::size_t max_full_vertices) {
  RomState r;
  r.n_vertices = g.a_sym.rows();
  r.n1 = s1.n1;
  r.m = subset.m();
  r.m0 = null.m0;
  r.krylov_dim = s2.krylov_dim;
  r.n = r.krylov_dim + r.m0;
  r.targets = subset.indices;
  for (std::size_t i : subset.indices) r.d_hat.push_back(g.norm.d[i]);

  r.v = hcat(s2.q2, null.z1);
  const std::size_t nk = r.krylov_dim;
  const DenseMatrix h = symmetrized(matmul_tn(s2.q2, matmul(s1.t1, s2.q2)));
  r.a12 = DenseMatrix(r.n, r.n);
  r.a12.set_block(0, 0, h);

  // Nullspace directions first, with exactly zero Ritz values.
  const EigenDecomposition he = sym_eig(h);
  r.ritz_values.assign(r.n, 0.0);
  r.ritz_coords = DenseMatrix(r.n, r.n);
  for (std::size_t j = 0; j < r.m0; ++j) r.ritz_coords(nk + j, j) = 1.0;
  for (std::size_t j = 0; j < nk; ++j) {
    r.ritz_values[r.m0 + j] = he.values[j];
    for (std::size_t i = 0; i < nk; ++i) r.ritz_coords(i, r.m0 + j) = he.vectors(i, j);
  }

  r.e1v = matmul_tn(r.v, s1.e1);
  r.c_block = r.e1v;
  for (std::size_t j = 0; j < r.m; ++j)
    for (std::size_t i = 0; i < r.n; ++i) r.c_block(i, j) *= std::sqrt(r.d_hat[j]);

  std::vector<double> sqrt_d(r.n_vertices);
  for (std::size_t i = 0; i < r.n_vertices; ++i) sqrt_d[i] = std::sqrt(g.norm.d[i]);
  r.q12t_sqrt_d_ones = matvec_t(r.v, matvec_t(s1.q1, sqrt_d));

  if (r.n_vertices <= max_full_vertices) r.q12 = matmul(s1.q1, r.v);
  return r;
}

RomBuild build_rom(const NormalizedGraph& g, const TargetSubset& subset, const RomOptions& opts) {
  RomBuild b;
  b.s1 = stage_one(g.a_sym, subset, opts.k1, opts.eps, opts.stage1_reorth);
  b.null = nullspace_block(b.s1.t1, opts.null_tol);

  const auto labels = connected_components(g.a_sym);
  std::set<std::size_t> touched;
  for (std::size_t i : subset.indices) touched.insert(labels[i]);
  if (touched.size() == b.null.m0) {
    DenseMatrix z = projected_component_nullspace(b.s1, g, subset, labels);
    if (z.cols() == b.null.m0) b.null.z1 = std::move(z);
  } else {
    b.warnings.push_back("m0 mismatch: nullspace dimension " + std::to_string(b.null.m0) +
                         " but " + std::to_string(touched.size()) +
                         " connected components contain targets (increase k1)");
  }
  b.s2 = stage_two(b.s1, b.null, opts.k2, opts.eps, opts.stage2_reorth);
  b.rom = assemble_rom(b.s1, b.null, b.s2, g, subset, opts.max_full_vertices);

  const double lmax = b.rom.ritz_values.empty() ? 0.0 : b.rom.ritz_values.back();
  for (std::size_t j = b.rom.m0; j < b.rom.n; ++j)
    if (b.rom.ritz_values[j] <= opts.null_tol * lmax)
      b.warnings.push_back("Ritz value " + std::to_string(j) +
                           " is numerically zero outside the nullspace block");
  return b;
}

void store_sampled_rows(RomState& rom, const StageOne& s1,
                        const std::vector<std::size_t>& vertices) {
  DenseMatrix rows(vertices.size(), s1.q1.cols());
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (vertices[k] >= s1.q1.rows()) throw InvalidArgument("sampled vertex out of range");
    for (std::size_t j = 0; j < s1.q1.cols(); ++j) rows(k, j) = s1.q1(vertices[k], j);
  }
  rom.sampled_vertices = vertices;
  rom.sampled_q12_rows = matmul(rows, rom.v);
}

DenseMatrix ritz_vector_rows(const RomState& rom, const std::vector<std::size_t>& vertices) {
  DenseMatrix rows(vertices.size(), rom.n);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const std::size_t q = vertices[k];
    if (rom.q12) {
      if (q >= rom.q12->rows()) throw InvalidArgument("vertex out of range");
      for (std::size_t j = 0; j < rom.n; ++j) rows(k, j) = (*rom.q12)(q, j);
      continue;
    }
    const auto it = std::find(rom.sampled_vertices.begin(), rom.sampled_vertices.end(), q);
    if (it == rom.sampled_vertices.end())
      throw InvalidArgument("vertex " + std::to_string(q) + " has no stored Ritz row");
    const auto r = static_cast<std::size_t>(it - rom.sampled_vertices.begin());
    for (std::size_t j = 0; j < rom.n; ++j) rows(k, j) = rom.sampled_q12_rows(r, j);
  }
  return matmul(rows, rom.ritz_coords);
}

TransferSamples transfer_full(const NormalizedGraph& g, const TargetSubset& subset,
                              double tau_step, const std::vector<std::size_t>& p_values) {
  const std::size_t n = g.a_sym.rows();
  subset.validate(n);
  TransferSamples out;
  out.tau_step = tau_step;
  out.p_values = p_values;
  const double limit = stability_step(g.a_sym);
  if (tau_step > limit * (1.0 + 1e-6))
    out.warnings.push_back("tau_step " + std::to_string(tau_step) + " exceeds the stability bound " +
                           std::to_string(limit) + "; iteration may be unstable");

  DenseMatrix x0(n, subset.m());
  for (std::size_t j = 0; j < subset.m(); ++j)
    x0(subset.indices[j], j) = std::sqrt(g.norm.d[subset.indices[j]]);
  std::vector<std::size_t> order(p_values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  out.f.resize(p_values.size());
  DenseMatrix x = x0;
  std::size_t p = 0;
  for (std::size_t idx : order) {
    while (p < p_values[idx]) {
      DenseMatrix ax = g.a_sym.apply(x);
      ax *= tau_step;
      x -= ax;
      ++p;
    }
    out.f[idx] = symmetrized(matmul_tn(x0, x));
  }
  return out;
}

TransferSamples transfer_rom(const RomState& rom, double tau_step,
                             const std::vector<std::size_t>& p_values) {
  TransferSamples out;
  out.tau_step = tau_step;
  out.p_values = p_values;
  const DenseMatrix r = rom.residues();
  for (std::size_t p : p_values) {
    DenseMatrix f(rom.m, rom.m);
    for (std::size_t j = 0; j < rom.n; ++j) {
      const double w = std::pow(1.0 - tau_step * rom.ritz_values[j], static_cast<double>(p));
      for (std::size_t b = 0; b < rom.m; ++b)
        for (std::size_t a = 0; a < rom.m; ++a) f(a, b) += w * r(a, j) * r(b, j);
    }
    out.f.push_back(std::move(f));
  }
  return out;
}

std::vector<double> transfer_relative_errors(const TransferSamples& full,
                                             const TransferSamples& rom) {
  if (full.f.size() != rom.f.size()) throw InvalidArgument("transfer samples differ in length");
  std::vector<double> e;
  for (std::size_t i = 0; i < full.f.size(); ++i) {
    const double scale = full.f[i].max_abs();
    const double diff = (full.f[i] - rom.f[i]).max_abs();
    e.push_back(scale > 0.0 ? diff / scale : diff);
  }
  return e;
}

MomentReport moment_check(const RomState& rom, const EigenDecomposition& full_eig,
                          std::size_t k2, double null_tol) {
  MomentReport rep;
  const std::size_t blocks = rom.m == 0 ? 0 : (rom.n - rom.m0) / rom.m;
  rep.deflated = rom.n - rom.m0 != k2 * rom.m;
  rep.checked_order = rep.deflated ? 2 * blocks : 2 * k2;
  if (rep.checked_order == 0) return rep;

  // Full residues r_j = B^T D^{1/2} u_j.
  const std::size_t nfull = full_eig.values.size();
  const double lmax = full_eig.values.back();
  DenseMatrix rf(rom.m, nfull);
  for (std::size_t j = 0; j < nfull; ++j)
    for (std::size_t a = 0; a < rom.m; ++a)
      rf(a, j) = std::sqrt(rom.d_hat[a]) * full_eig.vectors(rom.targets[a], j);
  const DenseMatrix rr = rom.residues();

  for (std::size_t i = 0; i < rep.checked_order; ++i) {
    DenseMatrix mf(rom.m, rom.m), mr(rom.m, rom.m);
    for (std::size_t j = 0; j < nfull; ++j) {
      const double l = full_eig.values[j];
      if (l <= null_tol * lmax) continue;
      const double w = std::pow(l, -static_cast<double>(i + 1));
      for (std::size_t b = 0; b < rom.m; ++b)
        for (std::size_t a = 0; a < rom.m; ++a) mf(a, b) += w * rf(a, j) * rf(b, j);
    }
    for (std::size_t j = rom.m0; j < rom.n; ++j) {
      const double w = std::pow(rom.ritz_values[j], -static_cast<double>(i + 1));
      for (std::size_t b = 0; b < rom.m; ++b)
        for (std::size_t a = 0; a < rom.m; ++a) mr(a, b) += w * rr(a, j) * rr(b, j);
    }
    const double diff = (mf - mr).max_abs();
    rep.abs_err.push_back(diff);
    rep.rel_err.push_back(mf.max_abs() > 0.0 ? diff / mf.max_abs() : diff);
  }
  return rep;
}

}  // namespace graphrom
