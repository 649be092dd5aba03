#include "graphrom/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "graphrom/error.hpp"
#include "graphrom/rng.hpp"

namespace graphrom {

void validate_laplacian(const CsrMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) throw InvalidArgument("laplacian: matrix not square");
  const double scale = m.max_abs();
  const auto& rp = m.row_ptr();
  const auto& ci = m.col_idx();
  const auto& v = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const std::size_t j = ci[k];
      if (!std::isfinite(v[k])) throw InvalidArgument("laplacian: non-finite entry");
      if (j == i && v[k] < 0.0)
        throw InvalidArgument("laplacian: negative diagonal at row " + std::to_string(i));
      if (j != i && v[k] > 0.0)
        throw InvalidArgument("laplacian: positive off-diagonal at row " + std::to_string(i));
      if (m.at(j, i) != v[k])
        throw InvalidArgument("laplacian: not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      sum += v[k];
    }
    if (std::abs(sum) > rel_tol * scale)
      throw InvalidArgument("laplacian: nonzero row sum at row " + std::to_string(i));
  }
}

GraphLaplacian GraphLaplacian::from_matrix(CsrMatrix m) {
  validate_laplacian(m);
  GraphLaplacian l;
  l.row_diag = m.diagonal();
  l.entries = std::move(m);
  return l;
}

GraphLaplacian GraphLaplacian::from_weights(const CsrMatrix& w) {
  if (w.rows() != w.cols()) throw InvalidArgument("weights: matrix not square");
  std::vector<Triplet> t;
  t.reserve(w.nnz() + w.rows());
  const auto& rp = w.row_ptr();
  for (std::size_t i = 0; i < w.rows(); ++i) {
    double deg = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const std::size_t j = w.col_idx()[k];
      const double x = w.values()[k];
      if (j == i || x == 0.0) continue;
      if (x < 0.0) throw InvalidArgument("weights: negative weight");
      t.push_back({i, j, -x});
      deg += x;
    }
    t.push_back({i, i, deg});
  }
  CsrMatrix m = CsrMatrix::from_triplets(w.rows(), w.cols(), std::move(t));
  // Recompute each diagonal from the stored off-diagonals so row sums cancel to rounding.
  auto& vals = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    std::size_t diag = SIZE_MAX;
    for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      if (m.col_idx()[k] == i)
        diag = k;
      else
        s -= vals[k];
    }
    if (diag != SIZE_MAX) vals[diag] = s;
  }
  return from_matrix(std::move(m));
}

void TargetSubset::validate(std::size_t n) const {
  if (indices.empty()) throw InvalidArgument("target subset is empty");
  if (indices.size() > n) throw InvalidArgument("target subset larger than the graph");
  std::unordered_set<std::size_t> seen;
  for (std::size_t i : indices) {
    if (i >= n) throw InvalidArgument("target vertex " + std::to_string(i) + " out of range");
    if (!seen.insert(i).second)
      throw InvalidArgument("target vertex " + std::to_string(i) + " repeated");
  }
}

std::vector<Edge> parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == '%') continue;
    std::istringstream ss(line);
    Edge e;
    if (!(ss >> e.u >> e.v))
      throw IoError("edge list line " + std::to_string(lineno) + ": expected 'u v [w]'");
    double w;
    if (ss >> w) e.w = w;
    edges.push_back(e);
  }
  return edges;
}

std::vector<Edge> read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list '" + path + "'");
  return parse_edge_list(in);
}

IngestedGraph laplacian_from_edge_list(std::span<const Edge> edges, const EdgeListOptions& opts) {
  if (edges.empty()) throw InvalidArgument("edge list is empty");
  IngestedGraph out;
  std::vector<std::int64_t> ids;
  for (const auto& e : edges) {
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw InvalidArgument("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") has non-positive weight");
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto index_of = [&](std::int64_t id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  const double factor = opts.directed ? 0.5 : 1.0;
  std::vector<Triplet> t;
  for (const auto& e : edges) {
    if (e.u == e.v) {
      ++out.self_loops_dropped;
      continue;
    }
    const std::size_t i = index_of(e.u);
    const std::size_t j = index_of(e.v);
    t.push_back({i, j, factor * e.w});
    t.push_back({j, i, factor * e.w});
  }
  if (t.empty()) throw InvalidArgument("edge list has no edges besides self-loops");
  const CsrMatrix w = CsrMatrix::from_triplets(ids.size(), ids.size(), std::move(t));
  GraphLaplacian l = GraphLaplacian::from_weights(w);

  if (opts.keep_isolated) {
    out.laplacian = std::move(l);
    out.external_ids = std::move(ids);
    return out;
  }
  IsolatedRemoval r = remove_isolated(l);
  out.isolated_removed = l.n_vertices() - r.laplacian.n_vertices();
  out.laplacian = std::move(r.laplacian);
  out.external_ids.reserve(r.kept.size());
  for (std::size_t k : r.kept) out.external_ids.push_back(ids[k]);
  return out;
}

PointCloud2D parse_point_cloud(std::istream& in, double tau) {
  PointCloud2D c;
  c.tau = tau;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y))
      throw IoError("point file line " + std::to_string(lineno) + ": expected 'x y'");
    c.points.push_back({x, y});
  }
  return c;
}

PointCloud2D read_point_cloud(const std::string& path, double tau) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open point file '" + path + "'");
  return parse_point_cloud(in, tau);
}

GraphLaplacian heat_kernel_laplacian(const PointCloud2D& cloud) {
  if (!(cloud.tau > 0.0)) throw InvalidArgument("heat kernel: tau must be positive");
  const std::size_t n = cloud.points.size();
  if (n < 2) throw InvalidArgument("heat kernel: need at least two points");
  const double inv_tau2 = 1.0 / (cloud.tau * cloud.tau);
  const bool sparsify = n > 2048;
  std::vector<Triplet> t;
  if (!sparsify) t.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = cloud.points[i][0] - cloud.points[j][0];
      const double dy = cloud.points[i][1] - cloud.points[j][1];
      const double w = std::exp(-(dx * dx + dy * dy) * inv_tau2);
      // The largest possible weight is 1 (coincident points).
      if (sparsify && w < 1e-16) continue;
      if (w > 0.0) t.push_back({i, j, w});
    }
  }
  return GraphLaplacian::from_weights(CsrMatrix::from_triplets(n, n, std::move(t)));
}

PointCloud2D two_ring_cloud(std::size_t per_ring, double r_inner, double r_outer, double jitter,
                            double tau, std::uint64_t seed) {
  if (per_ring < 1) throw InvalidArgument("two_ring_cloud: per_ring must be positive");
  if (!(r_inner > 0.0) || !(r_outer > r_inner))
    throw InvalidArgument("two_ring_cloud: need 0 < r_inner < r_outer");
  Rng rng(seed);
  PointCloud2D c;
  c.tau = tau;
  for (double r : {r_inner, r_outer}) {
    for (std::size_t k = 0; k < per_ring; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(per_ring);
      const double rr = r + jitter * (2.0 * rng.uniform() - 1.0);
      c.points.push_back({rr * std::cos(theta), rr * std::sin(theta)});
    }
  }
  return c;
}

namespace {

void add_edge(std::vector<Triplet>& t, std::size_t u, std::size_t v, double w) {
  t.push_back({u, v, w});
  t.push_back({v, u, w});
}

}  // namespace

PlantedGraph stochastic_block_model(const std::vector<std::size_t>& block_sizes, double p_in,
                                    double p_out, std::uint64_t seed, double w_lo,
                                    double w_hi) {
  if (block_sizes.empty()) throw InvalidArgument("sbm: no blocks");
  if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0)
    throw InvalidArgument("sbm: probabilities must lie in [0, 1]");
  if (!(w_lo > 0.0) || w_hi < w_lo) throw InvalidArgument("sbm: need 0 < w_lo <= w_hi");
  Rng rng(seed);
  PlantedGraph out;
  std::size_t start = 0;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    if (block_sizes[b] == 0) throw InvalidArgument("sbm: empty block");
    out.community.insert(out.community.end(), block_sizes[b], b);
    start += block_sizes[b];
  }
  const std::size_t n = start;
  auto weight = [&] { return w_lo + (w_hi - w_lo) * rng.uniform(); };
  std::vector<Triplet> t;
  // Spanning path through a random permutation of each block.
  start = 0;
  for (std::size_t size : block_sizes) {
    std::vector<std::size_t> perm(size);
    std::iota(perm.begin(), perm.end(), start);
    for (std::size_t i = size; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    for (std::size_t i = 0; i + 1 < size; ++i) add_edge(t, perm[i], perm[i + 1], weight());
    start += size;
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = out.community[u] == out.community[v] ? p_in : p_out;
      if (rng.uniform() < p) add_edge(t, u, v, weight());
    }
  out.laplacian = GraphLaplacian::from_weights(CsrMatrix::from_triplets(n, n, t));
  return out;
}

GraphLaplacian random_connected_graph(std::size_t n, double p_extra, std::uint64_t seed,
                                      double w_lo, double w_hi) {
  if (n < 2) throw InvalidArgument("random_connected_graph: need at least 2 vertices");
  if (p_extra < 0.0 || p_extra > 1.0)
    throw InvalidArgument("random_connected_graph: p_extra must lie in [0, 1]");
  if (!(w_lo > 0.0) || w_hi < w_lo)
    throw InvalidArgument("random_connected_graph: need 0 < w_lo <= w_hi");
  Rng rng(seed);
  auto weight = [&] { return w_lo + (w_hi - w_lo) * rng.uniform(); };
  std::vector<Triplet> t;
  for (std::size_t v = 1; v < n; ++v) add_edge(t, v, rng.below(v), weight());
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.uniform() < p_extra) add_edge(t, u, v, weight());
  return GraphLaplacian::from_weights(CsrMatrix::from_triplets(n, n, t));
}

GraphLaplacian disjoint_union(const GraphLaplacian& a, const GraphLaplacian& b) {
  const std::size_t na = a.n_vertices(), nb = b.n_vertices();
  std::vector<Triplet> t;
  for (const auto* part : {&a, &b}) {
    const std::size_t off = part == &a ? 0 : na;
    const auto& m = part->entries;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k)
        t.push_back({i + off, m.col_idx()[k] + off, m.values()[k]});
  }
  return GraphLaplacian::from_matrix(CsrMatrix::from_triplets(na + nb, na + nb, t));
}

namespace {

NormalizedGraph scale_symmetric(const GraphLaplacian& l, Normalization norm) {
  NormalizedGraph g;
  std::vector<double> inv_sqrt(norm.d.size());
  for (std::size_t i = 0; i < norm.d.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(norm.d[i]);
  g.a_sym = l.entries;
  auto& vals = g.a_sym.values();
  const auto& rp = g.a_sym.row_ptr();
  const auto& ci = g.a_sym.col_idx();
  for (std::size_t i = 0; i < g.a_sym.rows(); ++i)
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) vals[k] *= inv_sqrt[i] * inv_sqrt[ci[k]];
  g.norm = std::move(norm);
  return g;
}

}  // namespace

NormalizedGraph random_walk_normalize(const GraphLaplacian& l, bool keep_isolated) {
  Normalization norm;
  norm.kind = Normalization::Kind::random_walk;
  norm.d = l.row_diag;
  for (std::size_t i = 0; i < norm.d.size(); ++i) {
    if (norm.d[i] > 0.0) continue;
    if (!keep_isolated)
      throw InvalidArgument("random-walk normalization: vertex " + std::to_string(i) +
                            " has zero degree");
    norm.d[i] = 1.0;
  }
  return scale_symmetric(l, std::move(norm));
}

NormalizedGraph custom_normalize(const GraphLaplacian& l, std::span<const double> d) {
  if (d.size() != l.n_vertices()) throw InvalidArgument("normalization: size mismatch");
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0) || !std::isfinite(d[i]))
      throw InvalidArgument("normalization: d[" + std::to_string(i) + "] not positive");
  Normalization norm;
  norm.kind = Normalization::Kind::custom;
  norm.d.assign(d.begin(), d.end());
  return scale_symmetric(l, std::move(norm));
}

IsolatedRemoval remove_isolated(const GraphLaplacian& l) {
  IsolatedRemoval r;
  const std::size_t n = l.n_vertices();
  std::vector<std::size_t> new_id(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    if (l.row_diag[i] > 0.0) {
      new_id[i] = r.kept.size();
      r.kept.push_back(i);
    }
  }
  std::vector<Triplet> t;
  const auto& m = l.entries;
  for (std::size_t i = 0; i < n; ++i) {
    if (new_id[i] == SIZE_MAX) continue;
    for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      const std::size_t j = m.col_idx()[k];
      if (new_id[j] != SIZE_MAX) t.push_back({new_id[i], new_id[j], m.values()[k]});
    }
  }
  r.laplacian = GraphLaplacian::from_matrix(
      CsrMatrix::from_triplets(r.kept.size(), r.kept.size(), std::move(t)));
  return r;
}

std::vector<std::size_t> connected_components(const CsrMatrix& m, double threshold) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      const std::size_t j = m.col_idx()[k];
      if (j == i || std::abs(m.values()[k]) <= threshold) continue;
      const std::size_t a = find(i), b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::size_t> labels(n);
  std::vector<std::size_t> root_label(n, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (root_label[r] == SIZE_MAX) root_label[r] = next++;
    labels[i] = root_label[r];
  }
  return labels;
}

std::size_t component_count(std::span<const std::size_t> labels) {
  std::size_t c = 0;
  for (std::size_t l : labels) c = std::max(c, l + 1);
  return c;
}

double spectral_norm_estimate(const CsrMatrix& a, double rel_tol) {
  const std::size_t n = a.rows();
  if (n == 0) return 0.0;
  Rng rng(0x5eed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform() - 0.5;
  double nx = norm2(x);
  for (double& v : x) v /= nx;
  double est = 0.0;
  std::vector<double> y(n);
  for (int it = 0; it < 10000; ++it) {
    a.apply(x, y);
    const double ny = norm2(y);
    if (ny == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    if (it > 0 && std::abs(ny - est) <= rel_tol * ny) return ny;
    est = ny;
  }
  return est;
}

double stability_step(const CsrMatrix& a_sym) {
  const double norm = spectral_norm_estimate(a_sym);
  if (!(norm > 0.0)) throw InvalidArgument("stability step: operator norm is zero");
  return 2.0 / norm;
}

}  // namespace graphrom
