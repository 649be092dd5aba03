#include "graphrom/lanczos.hpp"

#include <algorithm>
#include <string>

#include "graphrom/error.hpp"
#include "graphrom/linalg.hpp"

namespace graphrom {

BlockOperator BlockOperator::from_csr(const CsrMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("operator must be square");
  return {m.rows(), [&m](const DenseMatrix& x) { return m.apply(x); }};
}

BlockOperator BlockOperator::from_dense(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("operator must be square");
  return {m.rows(), [&m](const DenseMatrix& x) { return matmul(m, x); }};
}

std::size_t BlockTridiagonal::total_dim() const noexcept {
  std::size_t n = 0;
  for (std::size_t s : block_sizes) n += s;
  return n;
}

std::size_t BlockTridiagonal::offset(std::size_t level) const {
  std::size_t o = 0;
  for (std::size_t j = 0; j < level; ++j) o += block_sizes.at(j);
  return o;
}

DenseMatrix BlockTridiagonal::assemble() const {
  if (alphas.size() != block_sizes.size() ||
      betas.size() != (alphas.empty() ? 0 : alphas.size() - 1))
    throw InvalidArgument("block tridiagonal: inconsistent level counts");
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    if (alphas[j].rows() != block_sizes[j] || alphas[j].cols() != block_sizes[j])
      throw InvalidArgument("block tridiagonal: alpha " + std::to_string(j) + " has wrong shape");
    if (j + 1 < alphas.size() &&
        (betas[j].rows() != block_sizes[j + 1] || betas[j].cols() != block_sizes[j]))
      throw InvalidArgument("block tridiagonal: beta " + std::to_string(j) + " has wrong shape");
  }
  const std::size_t n = total_dim();
  DenseMatrix t(n, n);
  std::size_t off = 0;
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    t.set_block(off, off, alphas[j]);
    if (j + 1 < alphas.size()) {
      t.set_block(off + block_sizes[j], off, betas[j]);
      t.set_block(off, off + block_sizes[j], betas[j].transpose());
    }
    off += block_sizes[j];
  }
  return t;
}

std::size_t LanczosBasis::total_cols() const noexcept {
  std::size_t n = 0;
  for (const auto& b : q_blocks) n += b.cols();
  return n;
}

DenseMatrix LanczosBasis::assemble() const {
  if (q_blocks.empty()) return {};
  DenseMatrix q(q_blocks.front().rows(), total_cols());
  std::size_t off = 0;
  for (const auto& b : q_blocks) {
    q.set_block(0, off, b);
    off += b.cols();
  }
  return q;
}

namespace {

// x -= Q (Q^T x) over all stored blocks.
void project_out(const std::vector<DenseMatrix>& blocks, DenseMatrix& x) {
  for (const auto& q : blocks) {
    if (q.cols() == 0) continue;
    const DenseMatrix coeff = matmul_tn(q, x);
    x -= matmul(q, coeff);
  }
}

double max_overlap(const std::vector<DenseMatrix>& blocks, const DenseMatrix& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    const double nx = norm2(x.col(j));
    if (nx == 0.0) continue;
    for (const auto& q : blocks)
      for (std::size_t i = 0; i < q.cols(); ++i)
        worst = std::max(worst, std::abs(dot(q.col(i), x.col(j))) / nx);
  }
  return worst;
}

// Modified Gram-Schmidt within a block that is already close to orthonormal.
void tidy_block(DenseMatrix& q) {
  for (std::size_t j = 0; j < q.cols(); ++j) {
    auto qj = q.col(j);
    for (std::size_t i = 0; i < j; ++i) axpy(-dot(q.col(i), qj), q.col(i), qj);
    const double nq = norm2(qj);
    for (double& v : qj) v /= nq;
  }
}

}  // namespace

LanczosResult deflated_block_lanczos(const BlockOperator& m, const DenseMatrix& c, std::size_t k,
                                     double eps, ReorthPolicy reorth, const DenseMatrix& locked) {
  if (!m.apply) throw InvalidArgument("lanczos: operator is empty");
  if (c.rows() != m.dim)
    throw InvalidArgument("lanczos: start block has " + std::to_string(c.rows()) +
                          " rows, operator dimension is " + std::to_string(m.dim));
  if (c.cols() == 0) throw InvalidArgument("lanczos: start block has no columns");
  if (k == 0) throw InvalidArgument("lanczos: k must be positive");
  if (!(eps > 0.0)) throw InvalidArgument("lanczos: eps must be positive");
  for (std::size_t j = 0; j < c.cols(); ++j)
    if (norm2(c.col(j)) == 0.0)
      throw InvalidArgument("lanczos: start block column " + std::to_string(j) + " is zero");
  if (orthonormality_error(c) > 1e-10)
    throw InvalidArgument("lanczos: start block is not orthonormal");
  if (locked.cols() > 0 && locked.rows() != m.dim)
    throw InvalidArgument("lanczos: locked basis has the wrong number of rows");
  const std::vector<DenseMatrix> lock_set{locked};
  const std::size_t capacity = m.dim - std::min(m.dim, locked.cols());

  LanczosResult out;
  auto& t = out.t;
  auto& blocks = out.q.q_blocks;
  blocks.push_back(c);
  std::size_t filled = c.cols();
  double scale = 0.0;

  for (std::size_t j = 0;; ++j) {
    const DenseMatrix& qj = blocks[j];
    DenseMatrix r = m.apply(qj);
    if (r.rows() != m.dim || r.cols() != qj.cols())
      throw InvalidArgument("lanczos: operator returned a block of the wrong shape");
    if (j == 0) {
      scale = thin_svd(r).sigma.front();
      if (!(scale > 0.0)) scale = 1.0;
    }

    DenseMatrix alpha = symmetrized(matmul_tn(qj, r));
    r -= matmul(qj, alpha);
    if (j > 0) r -= matmul_nt(blocks[j - 1], t.betas[j - 1]);
    t.alphas.push_back(std::move(alpha));
    t.block_sizes.push_back(qj.cols());

    bool reorthogonalize = reorth.kind == ReorthPolicy::Kind::full;
    if (reorth.kind == ReorthPolicy::Kind::selective)
      reorthogonalize = max_overlap(blocks, r) > reorth.threshold;
    if (reorthogonalize) {
      project_out(blocks, r);
      project_out(blocks, r);
    }
    if (locked.cols() > 0) {
      project_out(lock_set, r);
      project_out(lock_set, r);
    }

    if (j + 1 == k || filled >= capacity) {
      out.final_residual = std::move(r);
      break;
    }

    const SvdResult svd = thin_svd(r);
    std::size_t keep = 0;
    while (keep < svd.sigma.size() && !(svd.sigma[keep] < eps * scale)) ++keep;
    keep = std::min(keep, capacity - filled);
    if (keep < r.cols()) ++out.deflation_events;
    if (keep == 0) {
      out.invariant_subspace = true;
      out.final_residual = DenseMatrix(m.dim, 0);
      break;
    }

    DenseMatrix next = svd.u.columns(0, keep);
    DenseMatrix beta(keep, r.cols());
    for (std::size_t col = 0; col < r.cols(); ++col)
      for (std::size_t i = 0; i < keep; ++i) beta(i, col) = svd.sigma[i] * svd.w(col, i);
    if (locked.cols() > 0) project_out(lock_set, next);
    if (reorthogonalize) project_out(blocks, next);
    if (reorthogonalize || locked.cols() > 0) tidy_block(next);
    t.betas.push_back(std::move(beta));
    blocks.push_back(std::move(next));
    filled += keep;
  }
  return out;
}

}  // namespace graphrom
