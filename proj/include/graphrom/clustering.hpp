#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphrom/dense.hpp"
#include "graphrom/graph.hpp"
#include "graphrom/rogl.hpp"
#include "graphrom/rom.hpp"

namespace graphrom {

/// One row per entity.
struct Embedding {
  DenseMatrix coords;  // n_s x n0
  std::vector<std::size_t> entity_ids;

  std::size_t size() const noexcept { return coords.rows(); }
  std::size_t dim() const noexcept { return coords.cols(); }
};

/// Labels are 0-based cluster ids in [0, n_c).
struct ClusterAssignment {
  std::vector<std::size_t> labels;
  std::size_t n_c = 0;
  double inertia = 0.0;
  std::uint64_t seed = 0;
  std::size_t empty_clusters = 0;
  std::size_t iterations = 0;
  /// Inertia after every assignment step of the winning restart.
  std::vector<double> inertia_trace;
};

struct KMeansOptions {
  std::size_t max_iter = 300;
  std::size_t restarts = 10;
  /// Entities used as the first centers of every restart, before D^2 sampling.
  std::vector<std::size_t> forced_seeds;
};

/// kmeans++ seeding followed by Lloyd iterations; best inertia over restarts.
/// Restart r draws from substream ("kmeans", r) of `seed`.
ClusterAssignment kmeans_pp(const Embedding& points, std::size_t k, std::uint64_t seed,
                            const KMeansOptions& opts = {});

/// Rows u_k(i) / sqrt(d_i) of the n0 lowest eigenvectors of A (dense).
Embedding rwnsc_embedding(const NormalizedGraph& g, std::size_t n0);

/// Full-graph spectral clustering. The first center of each connected component (its
/// lowest vertex) is forced, up to n_c of them.
ClusterAssignment rwnsc_full(const NormalizedGraph& g, std::size_t n_c, std::size_t n0,
                             std::uint64_t seed, std::size_t max_vertices = 3000);

struct VertexSample {
  std::vector<std::size_t> vertices;  // targets first
  std::vector<std::string> warnings;
};

/// Targets in order, then uniform picks without replacement from the components that
/// contain a target. Draws from substream ("sampling", 0) of `seed`.
VertexSample sample_vertices(const NormalizedGraph& g, const TargetSubset& subset,
                             std::size_t n_s, std::uint64_t seed);

struct SubsetClustering {
  Embedding embedding;
  ClusterAssignment assignment;
  /// Cluster of each target (target order).
  std::vector<std::size_t> target_labels;
};

/// H_{jk} = e_{q_j}^T w_k, k < n0, clustered into n_c groups; targets are rows 0..m-1.
SubsetClustering rvsc_from_rom(const RomState& rom, const std::vector<std::size_t>& samples,
                               std::size_t n_c, std::size_t n0, std::uint64_t seed);

SubsetClustering rvsc(const NormalizedGraph& g, const TargetSubset& subset, std::size_t n_c,
                      std::size_t n0, std::size_t n_s, const RomOptions& opts,
                      std::uint64_t seed);

struct Plateau {
  std::size_t first = 0;  // index into the trial grid
  std::size_t last = 0;
  std::size_t n_g = 0;
};

struct PlateauChoice {
  std::size_t n_t_star = 0;
  std::size_t n_g_star = 0;
  Plateau chosen;
  std::vector<Plateau> plateaus;
};

/// Plateaus are maximal runs of equal n_g over the trial grid (in the given order). Picks
/// the plateau with n_g closest to n_c; ties prefer the smaller n_g, then the longer run,
/// then the earlier one. Returns the lower median n_t of the chosen run.
PlateauChoice plateau_search(const std::vector<std::pair<std::size_t, std::size_t>>& trials,
                             std::size_t n_c);

struct RoglcTrial {
  std::size_t n_t = 0;
  std::size_t n_g = 0;
  ClusterAssignment assignment;
};

struct RoglcResult {
  Embedding embedding;
  std::vector<RoglcTrial> trials;
  PlateauChoice choice;
  /// Cluster of each reduced target, numbered by first appearance.
  std::vector<std::size_t> target_labels;
};

/// Default trial grid n_c <= n_t <= min(4 n_c ceil(n/m), n - 1).
std::vector<std::size_t> default_trial_grid(std::size_t n_c, std::size_t n, std::size_t m);

/// Rows of D^{-1/2} u_k for the n0 lowest eigenvectors of D^{-1/2} L D^{-1/2}.
Embedding roglc_embedding(const Rogl& r, std::size_t n0);

/// Trial n_t draws from substream ("roglc", n_t) of `seed`. An empty grid selects the
/// default one.
RoglcResult roglc(const Rogl& r, std::size_t n_c, std::size_t n0,
                  std::vector<std::size_t> trial_grid, std::uint64_t seed);

/// True when two labelings induce the same partition.
bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

/// Labels renumbered by first appearance.
std::vector<std::size_t> canonical_labels(const std::vector<std::size_t>& labels);

/// entry (i, j): 1 if the two labelings agree on whether i and j share a cluster.
std::vector<std::vector<int>> consistency_matrix(const std::vector<std::size_t>& a,
                                                 const std::vector<std::size_t>& b);

/// Number of planted communities whose members (among the given entities) form exactly one
/// predicted cluster.
std::size_t recovered_communities(const std::vector<std::size_t>& predicted,
                                  const std::vector<std::size_t>& truth);

}  // namespace graphrom
