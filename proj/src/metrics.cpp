#include "graphrom/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "graphrom/error.hpp"
#include "graphrom/parallel.hpp"

namespace graphrom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_vertex(std::size_t v, std::size_t n, const char* what) {
  if (v >= n)
    throw InvalidArgument(std::string(what) + ": vertex " + std::to_string(v) +
                          " out of range (n = " + std::to_string(n) + ")");
}

double sq_norm(const std::vector<double>& x) {
  const double n = norm2(x);
  return n * n;
}

// |(I - M)^p w|^2 for a dense symmetric M.
double dense_diffusion_form(const DenseMatrix& m, std::vector<double> w, std::size_t p) {
  for (std::size_t s = 0; s < p; ++s) {
    const auto mw = matvec(m, w);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= mw[i];
  }
  return sq_norm(w);
}

double pinv_form(const EigenDecomposition& eig, std::size_t null_count,
                 const std::vector<double>& v) {
  DenseMatrix x(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) x(i, 0) = v[i];
  const DenseMatrix y = pinv_apply_excluding(eig, x, null_count);
  return dot(v, y.col(0));
}

double root(double q) { return std::isinf(q) ? q : std::sqrt(std::max(q, 0.0)); }

std::vector<std::pair<std::size_t, std::size_t>> target_pairs(std::size_t m, bool diagonal) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = diagonal ? j : j + 1; k < m; ++k) pairs.emplace_back(j, k);
  return pairs;
}

void fill_errors(DistanceReport& rep) {
  const std::size_t n = rep.pairs.size();
  rep.abs_err.assign(n, 0.0);
  rep.rel_err.assign(n, 0.0);
  rep.max_rel_err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = rep.full_values[i];
    const double r = rep.reduced_values[i];
    if (std::isinf(f) || std::isinf(r)) {
      const bool agree = std::isinf(f) && std::isinf(r);
      rep.abs_err[i] = agree ? 0.0 : kInf;
      rep.rel_err[i] = agree ? 0.0 : kInf;
    } else {
      rep.abs_err[i] = std::abs(f - r);
      rep.rel_err[i] = f > 0.0 ? rep.abs_err[i] / f : (rep.abs_err[i] > 0.0 ? kInf : 0.0);
    }
    rep.max_rel_err = std::max(rep.max_rel_err, rep.rel_err[i]);
  }
}

double diffusion_form_full(const NormalizedGraph& g, std::size_t j, std::size_t k,
                           std::size_t p) {
  const std::size_t n = g.a_sym.rows();
  std::vector<double> w(n, 0.0), aw(n);
  w[j] += std::sqrt(g.norm.d[j]);
  w[k] -= std::sqrt(g.norm.d[k]);
  for (std::size_t s = 0; s < p; ++s) {
    g.a_sym.apply(w, aw);
    for (std::size_t i = 0; i < n; ++i) w[i] -= aw[i];
  }
  return sq_norm(w);
}

std::vector<double> rogl_diffusion_vector(const Rogl& r, std::size_t j, std::size_t k) {
  std::vector<double> w(r.n, 0.0);
  w[j] += std::sqrt(r.d_tilde[j]);
  w[k] -= std::sqrt(r.d_tilde[k]);
  return w;
}

std::vector<double> rogl_commute_vector(const Rogl& r, std::size_t j, std::size_t k) {
  std::vector<double> v(r.n, 0.0);
  v[j] += 1.0 / std::sqrt(r.d_tilde[j]);
  v[k] -= 1.0 / std::sqrt(r.d_tilde[k]);
  return v;
}

}  // namespace

double diffusion_distance_full(const NormalizedGraph& g, std::size_t j, std::size_t k,
                               std::size_t p) {
  const std::size_t n = g.a_sym.rows();
  check_vertex(j, n, "diffusion distance");
  check_vertex(k, n, "diffusion distance");
  if (j == k) return 0.0;
  return root(diffusion_form_full(g, j, k, p));
}

CommuteSolver::CommuteSolver(const NormalizedGraph& g, std::size_t dense_limit, double cg_tol)
    : g_(&g), cg_tol_(cg_tol) {
  labels_ = connected_components(g.a_sym);
  components_ = component_count(labels_);
  const std::size_t n = g.a_sym.rows();
  if (n <= dense_limit) {
    eig_ = sym_eig(g.a_sym.to_dense());
    return;
  }
  null_basis_.assign(components_, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) null_basis_[labels_[i]][i] = std::sqrt(g.norm.d[i]);
  for (auto& z : null_basis_) {
    const double nz = norm2(z);
    for (double& v : z) v /= nz;
  }
}

std::vector<double> CommuteSolver::solve(const std::vector<double>& b) const {
  const std::size_t n = b.size();
  auto deflate = [this](std::vector<double>& x) {
    for (const auto& z : null_basis_) axpy(-dot(z, x), z, x);
  };
  std::vector<double> x(n, 0.0), r = b, ap(n);
  deflate(r);
  std::vector<double> dir = r;
  const double bnorm = norm2(r);
  if (bnorm == 0.0) return x;
  double rr = dot(r, r);
  const std::size_t max_iter = 20 * n + 100;
  for (std::size_t it = 0; it < max_iter; ++it) {
    g_->a_sym.apply(dir, ap);
    const double denom = dot(dir, ap);
    if (!(denom > 0.0)) throw NumericalError("commute CG: operator not positive on the range");
    const double alpha = rr / denom;
    axpy(alpha, dir, x);
    axpy(-alpha, ap, r);
    deflate(r);
    const double rr_new = dot(r, r);
    last_iterations_ = it + 1;
    if (std::sqrt(rr_new) <= cg_tol_ * bnorm) {
      deflate(x);
      return x;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) dir[i] = r[i] + beta * dir[i];
  }
  throw NumericalError("commute CG did not reach tolerance in " + std::to_string(max_iter) +
                       " iterations");
}

double CommuteSolver::distance(std::size_t j, std::size_t k) const {
  const std::size_t n = g_->a_sym.rows();
  check_vertex(j, n, "commute distance");
  check_vertex(k, n, "commute distance");
  if (j == k) return 0.0;
  if (labels_[j] != labels_[k]) return kInf;
  std::vector<double> v(n, 0.0);
  v[j] += 1.0 / std::sqrt(g_->norm.d[j]);
  v[k] -= 1.0 / std::sqrt(g_->norm.d[k]);
  if (eig_) return root(pinv_form(*eig_, components_, v));
  return root(dot(v, solve(v)));
}

double commute_distance_full(const NormalizedGraph& g, std::size_t j, std::size_t k) {
  return CommuteSolver(g).distance(j, k);
}

double diffusion_distance_rogl(const Rogl& r, std::size_t j, std::size_t k, std::size_t p) {
  check_vertex(j, r.m, "reduced diffusion distance");
  check_vertex(k, r.m, "reduced diffusion distance");
  if (j == k) return 0.0;
  return root(dense_diffusion_form(r.a_dense, rogl_diffusion_vector(r, j, k), p));
}

double commute_distance_rogl(const Rogl& r, std::size_t j, std::size_t k) {
  check_vertex(j, r.m, "reduced commute distance");
  check_vertex(k, r.m, "reduced commute distance");
  if (j == k) return 0.0;
  const auto comps = reduced_nullspace_indicators(r.l_tilde);
  if (comps.labels[j] != comps.labels[k]) return kInf;
  return root(pinv_form(sym_eig(r.a_dense), r.m0, rogl_commute_vector(r, j, k)));
}

DistanceReport diffusion_report(const NormalizedGraph& g, const TargetSubset& subset,
                                const Rogl& r, std::size_t p) {
  subset.validate(g.a_sym.rows());
  if (subset.m() != r.m) throw InvalidArgument("diffusion report: subset and ROGL disagree on m");
  DistanceReport rep;
  rep.kind = "diffusion";
  rep.p = p;
  rep.pairs = target_pairs(r.m, true);
  rep.full_values.assign(rep.pairs.size(), 0.0);
  rep.reduced_values.assign(rep.pairs.size(), 0.0);
  parallel_for(rep.pairs.size(), [&](std::size_t i) {
    const auto [j, k] = rep.pairs[i];
    rep.full_values[i] = diffusion_distance_full(g, subset.indices[j], subset.indices[k], p);
    rep.reduced_values[i] = diffusion_distance_rogl(r, j, k, p);
  });
  fill_errors(rep);
  return rep;
}

DistanceReport commute_report(const NormalizedGraph& g, const TargetSubset& subset,
                              const Rogl& r) {
  subset.validate(g.a_sym.rows());
  if (subset.m() != r.m) throw InvalidArgument("commute report: subset and ROGL disagree on m");
  const CommuteSolver solver(g);
  const EigenDecomposition reig = sym_eig(r.a_dense);
  const auto comps = reduced_nullspace_indicators(r.l_tilde);
  DistanceReport rep;
  rep.kind = "commute";
  rep.pairs = target_pairs(r.m, true);
  rep.full_values.assign(rep.pairs.size(), 0.0);
  rep.reduced_values.assign(rep.pairs.size(), 0.0);
  for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
    const auto [j, k] = rep.pairs[i];
    rep.full_values[i] = solver.distance(subset.indices[j], subset.indices[k]);
    if (j == k)
      rep.reduced_values[i] = 0.0;
    else if (comps.labels[j] != comps.labels[k])
      rep.reduced_values[i] = kInf;
    else
      rep.reduced_values[i] = root(pinv_form(reig, r.m0, rogl_commute_vector(r, j, k)));
  }
  fill_errors(rep);
  return rep;
}

ErrorDecomposition error_decomposition(const NormalizedGraph& g, const RomBuild& build,
                                       const Rogl& r, std::size_t p) {
  const RomState& rom = build.rom;
  const std::size_t m = rom.m;
  if (r.m != m) throw InvalidArgument("error decomposition: ROM and ROGL disagree on m");
  const CommuteSolver solver(g);
  const EigenDecomposition& t1_eig = build.null.t1_eig;
  const EigenDecomposition a12_eig{rom.ritz_values, rom.ritz_coords};
  const EigenDecomposition at_eig = sym_eig(r.a_dense);
  const std::size_t n1 = build.s1.n1;

  ErrorDecomposition out;
  out.p = p;
  out.pairs = target_pairs(m, false);
  for (const auto& [j, k] : out.pairs) {
    const std::size_t vj = rom.targets[j], vk = rom.targets[k];
    const double sj = std::sqrt(rom.d_hat[j]), sk = std::sqrt(rom.d_hat[k]);

    // Stage one: T1 with E1.
    std::vector<double> w1(n1, 0.0), u1(n1, 0.0);
    w1[j] += sj;
    w1[k] -= sk;
    u1[j] += 1.0 / sj;
    u1[k] -= 1.0 / sk;
    // Stage two: A12 with V^T E1.
    const auto w2 = matvec_t(rom.v, w1);
    const auto u2 = matvec_t(rom.v, u1);
    // Stage three: A~ with E1.
    std::vector<double> w3(r.n, 0.0), u3(r.n, 0.0);
    w3[j] += std::sqrt(r.d_tilde[j]);
    w3[k] -= std::sqrt(r.d_tilde[k]);
    u3[j] += 1.0 / std::sqrt(r.d_tilde[j]);
    u3[k] -= 1.0 / std::sqrt(r.d_tilde[k]);

    const double x0p = diffusion_form_full(g, vj, vk, p);
    const double x1p = dense_diffusion_form(build.s1.t1, w1, p);
    const double x2p = dense_diffusion_form(rom.a12, w2, p);
    const double x3p = dense_diffusion_form(r.a_dense, w3, p);
    out.full_p.push_back(x0p);
    out.delta1_p.push_back(x0p - x1p);
    out.delta2_p.push_back(x1p - x2p);
    out.delta3_p.push_back(x2p - x3p);
    out.scale_p = std::max(out.scale_p, std::abs(x0p));

    const double c0 = solver.distance(vj, vk);
    if (std::isinf(c0)) {
      out.full_j.push_back(kInf);
      out.delta1_j.push_back(0.0);
      out.delta2_j.push_back(0.0);
      out.delta3_j.push_back(0.0);
      continue;
    }
    const double x0j = c0 * c0;
    const double x1j = pinv_form(t1_eig, rom.m0, u1);
    const double x2j = pinv_form(a12_eig, rom.m0, u2);
    const double x3j = pinv_form(at_eig, r.m0, u3);
    out.full_j.push_back(x0j);
    out.delta1_j.push_back(x0j - x1j);
    out.delta2_j.push_back(x1j - x2j);
    out.delta3_j.push_back(x2j - x3j);
    out.scale_j = std::max(out.scale_j, std::abs(x0j));
  }
  return out;
}

}  // namespace graphrom
