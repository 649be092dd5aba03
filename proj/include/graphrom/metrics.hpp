#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphrom/graph.hpp"
#include "graphrom/linalg.hpp"
#include "graphrom/rogl.hpp"
#include "graphrom/rom.hpp"

namespace graphrom {

/// Distances are the square roots of the quadratic forms
///   diffusion: v^T (I - A)^{2p} v,  v = sqrt(d_j) e_j - sqrt(d_k) e_k
///   commute:   v^T A^+ v,           v = e_j / sqrt(d_j) - e_k / sqrt(d_k)
/// Cross-component commute distances are +infinity.
double diffusion_distance_full(const NormalizedGraph& g, std::size_t j, std::size_t k,
                               std::size_t p);

/// Commute distances on the full graph. Dense pseudo-inverse up to `dense_limit` vertices,
/// conjugate gradients on the range of A (component nullspace deflated) beyond that.
class CommuteSolver {
 public:
  explicit CommuteSolver(const NormalizedGraph& g, std::size_t dense_limit = 500,
                         double cg_tol = 1e-10);
  double distance(std::size_t j, std::size_t k) const;
  bool uses_cg() const { return !eig_.has_value(); }
  std::size_t last_iterations() const { return last_iterations_; }

 private:
  std::vector<double> solve(const std::vector<double>& b) const;
  const NormalizedGraph* g_;
  std::vector<std::size_t> labels_;
  std::size_t components_ = 0;
  std::optional<EigenDecomposition> eig_;
  std::vector<std::vector<double>> null_basis_;
  double cg_tol_;
  mutable std::size_t last_iterations_ = 0;
};

double commute_distance_full(const NormalizedGraph& g, std::size_t j, std::size_t k);

/// Same forms on the reduced graph with D~ and A~; j, k index the reduced targets.
double diffusion_distance_rogl(const Rogl& r, std::size_t j, std::size_t k, std::size_t p);
double commute_distance_rogl(const Rogl& r, std::size_t j, std::size_t k);

struct DistanceReport {
  std::string kind;  // "diffusion" or "commute"
  std::optional<std::size_t> p;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // target-subset indices, j <= k
  std::vector<double> full_values;
  std::vector<double> reduced_values;
  std::vector<double> abs_err;
  std::vector<double> rel_err;
  double max_rel_err = 0.0;
};

DistanceReport diffusion_report(const NormalizedGraph& g, const TargetSubset& subset,
                                const Rogl& r, std::size_t p);
DistanceReport commute_report(const NormalizedGraph& g, const TargetSubset& subset,
                              const Rogl& r);

/// Per-pair splitting of the reduction error into the three stages, for the polynomial
/// family (I - A)^{2p} and the pseudo-inverse family. Values are differences of the
/// quadratic forms: delta1 = full - stage one, delta2 = stage one - stage two,
/// delta3 = stage two - stage three.
struct ErrorDecomposition {
  std::size_t p = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> full_p, full_j;
  std::vector<double> delta1_p, delta2_p, delta3_p;
  std::vector<double> delta1_j, delta2_j, delta3_j;
  double scale_p = 0.0;  // max |full_p|
  double scale_j = 0.0;  // max |full_j| over finite pairs
};

ErrorDecomposition error_decomposition(const NormalizedGraph& g, const RomBuild& build,
                                       const Rogl& r, std::size_t p);

}  // namespace graphrom
