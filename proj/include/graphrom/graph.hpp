#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphrom/sparse.hpp"

namespace graphrom {

/// Symmetric, zero-row-sum matrix with nonpositive off-diagonals.
struct GraphLaplacian {
  CsrMatrix entries;
  std::vector<double> row_diag;

  std::size_t n_vertices() const noexcept { return entries.rows(); }

  /// Validates the invariants (symmetry, zero row sums to 1e-12 relative, signs).
  static GraphLaplacian from_matrix(CsrMatrix m);
  /// L = diag(W 1) - W for a symmetric nonnegative weight matrix with empty diagonal.
  static GraphLaplacian from_weights(const CsrMatrix& w);
};

/// Throws InvalidArgument describing the first violated invariant.
void validate_laplacian(const CsrMatrix& m, double rel_tol = 1e-12);

struct Normalization {
  enum class Kind { random_walk, custom };
  std::vector<double> d;
  Kind kind = Kind::random_walk;
};

/// D^{-1/2} L D^{-1/2} together with the diagonal D.
struct NormalizedGraph {
  Normalization norm;
  CsrMatrix a_sym;
};

struct TargetSubset {
  std::vector<std::size_t> indices;  // 0-based internal vertex ids, in target order

  std::size_t m() const noexcept { return indices.size(); }
  /// Throws InvalidArgument unless ids are distinct and below n.
  void validate(std::size_t n) const;
};

struct PointCloud2D {
  std::vector<std::array<double, 2>> points;
  double tau = 0.6;
};

struct Edge {
  std::int64_t u;
  std::int64_t v;
  double w = 1.0;
};

struct EdgeListOptions {
  bool directed = false;       // symmetrize as (W + W^T)/2
  bool keep_isolated = false;  // keep vertices left without edges
};

/// Laplacian from an edge list plus the bookkeeping of the conversion.
struct IngestedGraph {
  GraphLaplacian laplacian;
  std::vector<std::int64_t> external_ids;  // internal id -> external id
  std::size_t self_loops_dropped = 0;
  std::size_t isolated_removed = 0;
};

/// "u v [w]" per line, '#' comment lines and blank lines ignored.
std::vector<Edge> parse_edge_list(std::istream& in);
std::vector<Edge> read_edge_list(const std::string& path);

/// Self-loops are dropped (and counted), duplicates summed, ids sorted numerically.
IngestedGraph laplacian_from_edge_list(std::span<const Edge> edges,
                                       const EdgeListOptions& opts = {});

/// "x y" per line.
PointCloud2D parse_point_cloud(std::istream& in, double tau);
PointCloud2D read_point_cloud(const std::string& path, double tau);

/// Fully connected heat-kernel Laplacian, L_ij = -exp(-|x_i - x_j|^2 / tau^2).
/// For more than 2048 points, weights below 1e-16 of the largest are not stored.
GraphLaplacian heat_kernel_laplacian(const PointCloud2D& cloud);

/// Two concentric rings of `per_ring` points each, with small radial jitter.
/// Points [0, per_ring) form the inner ring.
PointCloud2D two_ring_cloud(std::size_t per_ring, double r_inner, double r_outer, double jitter,
                            double tau, std::uint64_t seed);

struct PlantedGraph {
  GraphLaplacian laplacian;
  std::vector<std::size_t> community;  // planted block of each vertex
};

/// Stochastic block model: vertices of block b are consecutive; an edge joins two vertices
/// with probability p_in inside a block and p_out across blocks, weight uniform in
/// [w_lo, w_hi]. A random spanning path inside each block keeps blocks connected.
PlantedGraph stochastic_block_model(const std::vector<std::size_t>& block_sizes, double p_in,
                                    double p_out, std::uint64_t seed, double w_lo = 1.0,
                                    double w_hi = 1.0);

/// Connected graph on n vertices: a random spanning tree plus Erdos-Renyi edges with
/// probability p_extra, weights uniform in [w_lo, w_hi].
GraphLaplacian random_connected_graph(std::size_t n, double p_extra, std::uint64_t seed,
                                      double w_lo = 0.5, double w_hi = 1.5);

/// Block-diagonal union; vertices of b follow those of a.
GraphLaplacian disjoint_union(const GraphLaplacian& a, const GraphLaplacian& b);

/// D = diag(L). Zero diagonal entries are rejected unless keep_isolated, which sets d_i = 1.
NormalizedGraph random_walk_normalize(const GraphLaplacian& l, bool keep_isolated = false);
/// D given explicitly (all entries positive).
NormalizedGraph custom_normalize(const GraphLaplacian& l, std::span<const double> d);

struct IsolatedRemoval {
  GraphLaplacian laplacian;
  std::vector<std::size_t> kept;  // new id -> old id
};
IsolatedRemoval remove_isolated(const GraphLaplacian& l);

/// Component label per vertex, numbered 0.. in order of first appearance.
std::vector<std::size_t> connected_components(const CsrMatrix& m, double threshold = 0.0);
std::size_t component_count(std::span<const std::size_t> labels);

/// 2 / |A|_2 with the norm estimated by power iteration to 1e-6 relative.
double stability_step(const CsrMatrix& a_sym);
double spectral_norm_estimate(const CsrMatrix& a_sym, double rel_tol = 1e-6);

}  // namespace graphrom
