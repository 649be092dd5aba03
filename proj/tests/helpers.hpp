#pragma once

#include <Eigen/Dense>

#include "graphrom/dense.hpp"
#include "graphrom/graph.hpp"
#include "graphrom/rng.hpp"

namespace testutil {

inline Eigen::MatrixXd to_eigen(const graphrom::DenseMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) e(i, j) = m(i, j);
  return e;
}

inline graphrom::DenseMatrix from_eigen(const Eigen::MatrixXd& e) {
  graphrom::DenseMatrix m(e.rows(), e.cols());
  for (Eigen::Index j = 0; j < e.cols(); ++j)
    for (Eigen::Index i = 0; i < e.rows(); ++i) m(i, j) = e(i, j);
  return m;
}

inline graphrom::DenseMatrix random_matrix(std::size_t r, std::size_t c, graphrom::Rng& rng) {
  graphrom::DenseMatrix m(r, c);
  for (double& v : m.storage()) v = rng.normal();
  return m;
}

/// X X^T with X n x rank, so the result is PSD with the given rank.
inline graphrom::DenseMatrix random_psd(std::size_t n, std::size_t rank, graphrom::Rng& rng) {
  const auto x = random_matrix(n, rank, rng);
  return graphrom::matmul_nt(x, x);
}

inline double max_abs_diff(const graphrom::DenseMatrix& a, const graphrom::DenseMatrix& b) {
  return (a - b).max_abs();
}

/// Two-ring heat-kernel graph used across the suites (50 points per ring).
inline graphrom::NormalizedGraph ring_graph(std::uint64_t seed = 1, double jitter = 0.05) {
  const auto cloud = graphrom::two_ring_cloud(50, 1.0, 3.0, jitter, 0.6, seed);
  return graphrom::random_walk_normalize(graphrom::heat_kernel_laplacian(cloud));
}

/// Two vertices per ring, half a turn apart.
inline graphrom::TargetSubset ring_targets() { return {{0, 25, 50, 75}}; }

/// Path on n vertices with unit weights.
inline graphrom::GraphLaplacian path_graph(std::size_t n, double w = 1.0) {
  std::vector<graphrom::Triplet> t;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.push_back({i, i + 1, w});
    t.push_back({i + 1, i, w});
  }
  return graphrom::GraphLaplacian::from_weights(graphrom::CsrMatrix::from_triplets(n, n, t));
}

inline graphrom::GraphLaplacian complete_graph(std::size_t n, double w = 1.0) {
  std::vector<graphrom::Triplet> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) t.push_back({i, j, w});
  return graphrom::GraphLaplacian::from_weights(graphrom::CsrMatrix::from_triplets(n, n, t));
}

}  // namespace testutil
