#include "graphrom/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "graphrom/error.hpp"
#include "graphrom/linalg.hpp"
#include "graphrom/parallel.hpp"
#include "graphrom/rng.hpp"

namespace graphrom {

namespace {

double sq_dist(const DenseMatrix& x, std::size_t i, const DenseMatrix& c, std::size_t k) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.cols(); ++d) {
    const double t = x(i, d) - c(k, d);
    s += t * t;
  }
  return s;
}

void copy_row(const DenseMatrix& from, std::size_t i, DenseMatrix& to, std::size_t k) {
  for (std::size_t d = 0; d < from.cols(); ++d) to(k, d) = from(i, d);
}

DenseMatrix seed_centers(const DenseMatrix& x, std::size_t k,
                         const std::vector<std::size_t>& forced, Rng& rng) {
  const std::size_t n = x.rows();
  DenseMatrix centers(k, x.cols());
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(n, false);
  std::size_t placed = 0;
  auto place = [&](std::size_t i) {
    copy_row(x, i, centers, placed);
    chosen[i] = true;
    for (std::size_t p = 0; p < n; ++p) best[p] = std::min(best[p], sq_dist(x, p, centers, placed));
    ++placed;
  };
  for (std::size_t i : forced) {
    if (placed == k) break;
    if (!chosen[i]) place(i);
  }
  if (placed == 0) place(rng.below(n));
  while (placed < k) {
    double total = 0.0;
    for (double b : best) total += b;
    std::size_t pick = n;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        acc += best[p];
        if (acc > u && best[p] > 0.0) {
          pick = p;
          break;
        }
      }
      // Rounding can leave u at the very end of the cumulative sum.
      if (pick == n)
        for (std::size_t p = n; p-- > 0;)
          if (best[p] > 0.0) {
            pick = p;
            break;
          }
    } else {
      for (std::size_t p = 0; p < n && pick == n; ++p)
        if (!chosen[p]) pick = p;
    }
    place(pick);
  }
  return centers;
}

ClusterAssignment lloyd(const DenseMatrix& x, DenseMatrix centers, std::size_t max_iter) {
  const std::size_t n = x.rows(), k = centers.rows(), dim = x.cols();
  ClusterAssignment a;
  a.n_c = k;
  a.labels.assign(n, k);
  for (std::size_t it = 0; it < std::max<std::size_t>(max_iter, 1); ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t arg = 0;
      double bd = sq_dist(x, p, centers, 0);
      for (std::size_t c = 1; c < k; ++c) {
        const double dd = sq_dist(x, p, centers, c);
        if (dd < bd) {
          bd = dd;
          arg = c;
        }
      }
      if (a.labels[p] != arg) changed = true;
      a.labels[p] = arg;
      inertia += bd;
    }
    a.inertia_trace.push_back(inertia);
    a.iterations = it + 1;
    if (!changed) break;
    // Empty clusters keep their previous centroid.
    DenseMatrix sums(k, dim);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t p = 0; p < n; ++p) {
      ++counts[a.labels[p]];
      for (std::size_t d = 0; d < dim; ++d) sums(a.labels[p], d) += x(p, d);
    }
    for (std::size_t c = 0; c < k; ++c)
      if (counts[c] > 0)
        for (std::size_t d = 0; d < dim; ++d)
          centers(c, d) = sums(c, d) / static_cast<double>(counts[c]);
  }
  a.inertia = 0.0;
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t p = 0; p < n; ++p) {
    a.inertia += sq_dist(x, p, centers, a.labels[p]);
    ++counts[a.labels[p]];
  }
  a.empty_clusters = static_cast<std::size_t>(std::count(counts.begin(), counts.end(), 0));
  return a;
}

void check_embedding(const Embedding& e) {
  if (e.dim() == 0) throw InvalidArgument("embedding has no coordinates");
  if (!e.coords.all_finite()) throw NumericalError("embedding has non-finite coordinates");
}

}  // namespace

ClusterAssignment kmeans_pp(const Embedding& points, std::size_t k, std::uint64_t seed,
                            const KMeansOptions& opts) {
  const std::size_t n = points.size();
  if (k == 0) throw InvalidArgument("kmeans: k must be positive");
  if (k > n)
    throw InvalidArgument("kmeans: k = " + std::to_string(k) + " exceeds the " +
                          std::to_string(n) + " points");
  check_embedding(points);
  for (std::size_t i : opts.forced_seeds)
    if (i >= n) throw InvalidArgument("kmeans: forced seed out of range");
  const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);
  std::vector<ClusterAssignment> runs(restarts);
  parallel_for(
      restarts,
      [&](std::size_t r) {
        Rng rng(substream_seed(seed, "kmeans", r));
        runs[r] = lloyd(points.coords, seed_centers(points.coords, k, opts.forced_seeds, rng),
                        opts.max_iter);
      },
      2);
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (runs[r].inertia < runs[best].inertia) best = r;
  ClusterAssignment out = std::move(runs[best]);
  out.seed = seed;
  return out;
}

Embedding rwnsc_embedding(const NormalizedGraph& g, std::size_t n0) {
  const std::size_t n = g.a_sym.rows();
  if (n0 == 0 || n0 > n) throw InvalidArgument("rwnsc: n0 must lie in [1, N]");
  const EigenDecomposition eig = sym_eig(g.a_sym.to_dense());
  Embedding e;
  e.coords = DenseMatrix(n, n0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = 1.0 / std::sqrt(g.norm.d[i]);
    for (std::size_t k = 0; k < n0; ++k) e.coords(i, k) = eig.vectors(i, k) * s;
  }
  e.entity_ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.entity_ids[i] = i;
  return e;
}

ClusterAssignment rwnsc_full(const NormalizedGraph& g, std::size_t n_c, std::size_t n0,
                             std::uint64_t seed, std::size_t max_vertices) {
  const std::size_t n = g.a_sym.rows();
  if (n > max_vertices)
    throw InvalidArgument("rwnsc: " + std::to_string(n) + " vertices exceed the dense limit " +
                          std::to_string(max_vertices));
  const Embedding e = rwnsc_embedding(g, n0);
  const auto labels = connected_components(g.a_sym);
  KMeansOptions opts;
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < n && opts.forced_seeds.size() < n_c; ++i)
    if (seen.insert(labels[i]).second) opts.forced_seeds.push_back(i);
  if (opts.forced_seeds.size() <= 1) opts.forced_seeds.clear();
  return kmeans_pp(e, n_c, seed, opts);
}

VertexSample sample_vertices(const NormalizedGraph& g, const TargetSubset& subset,
                             std::size_t n_s, std::uint64_t seed) {
  const std::size_t n = g.a_sym.rows();
  subset.validate(n);
  if (n_s < subset.m()) throw InvalidArgument("sample_vertices: n_s is smaller than m");
  VertexSample out;
  out.vertices = subset.indices;
  const auto labels = connected_components(g.a_sym);
  std::set<std::size_t> comps;
  for (std::size_t i : subset.indices) comps.insert(labels[i]);
  std::set<std::size_t> targets(subset.indices.begin(), subset.indices.end());
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < n; ++i)
    if (comps.count(labels[i]) && !targets.count(i)) pool.push_back(i);
  std::size_t extra = n_s - subset.m();
  if (extra > pool.size()) {
    out.warnings.push_back("n_s = " + std::to_string(n_s) + " exceeds the " +
                           std::to_string(pool.size() + subset.m()) +
                           " reachable vertices; clamped");
    extra = pool.size();
  }
  Rng rng(substream_seed(seed, "sampling", 0));
  for (std::size_t i = 0; i < extra; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    out.vertices.push_back(pool[i]);
  }
  return out;
}

SubsetClustering rvsc_from_rom(const RomState& rom, const std::vector<std::size_t>& samples,
                               std::size_t n_c, std::size_t n0, std::uint64_t seed) {
  if (n0 == 0 || n0 > rom.n)
    throw InvalidArgument("rvsc: n0 = " + std::to_string(n0) + " must lie in [1, n = " +
                          std::to_string(rom.n) + "]");
  if (samples.size() < rom.m) throw InvalidArgument("rvsc: fewer samples than targets");
  for (std::size_t j = 0; j < rom.m; ++j)
    if (samples[j] != rom.targets[j])
      throw InvalidArgument("rvsc: the first samples must be the targets in order");
  const DenseMatrix w = ritz_vector_rows(rom, samples);
  SubsetClustering out;
  out.embedding.coords = w.columns(0, n0);
  out.embedding.entity_ids = samples;
  out.assignment = kmeans_pp(out.embedding, n_c, seed);
  out.target_labels.assign(out.assignment.labels.begin(),
                           out.assignment.labels.begin() + static_cast<std::ptrdiff_t>(rom.m));
  return out;
}

SubsetClustering rvsc(const NormalizedGraph& g, const TargetSubset& subset, std::size_t n_c,
                      std::size_t n0, std::size_t n_s, const RomOptions& opts,
                      std::uint64_t seed) {
  RomBuild b = build_rom(g, subset, opts);
  const std::size_t ns = n_s == 0 ? b.rom.n : n_s;
  const VertexSample s = sample_vertices(g, subset, ns, seed);
  if (!b.rom.q12) store_sampled_rows(b.rom, b.s1, s.vertices);
  return rvsc_from_rom(b.rom, s.vertices, n_c, n0, seed);
}

PlateauChoice plateau_search(const std::vector<std::pair<std::size_t, std::size_t>>& trials,
                             std::size_t n_c) {
  if (trials.empty()) throw InvalidArgument("plateau search: empty trial grid");
  PlateauChoice out;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (i > 0 && trials[i].second == out.plateaus.back().n_g)
      out.plateaus.back().last = i;
    else
      out.plateaus.push_back({i, i, trials[i].second});
  }
  auto gap = [n_c](std::size_t n_g) { return n_g > n_c ? n_g - n_c : n_c - n_g; };
  const Plateau* best = &out.plateaus.front();
  for (const Plateau& p : out.plateaus) {
    const std::size_t len = p.last - p.first, best_len = best->last - best->first;
    if (gap(p.n_g) != gap(best->n_g)) {
      if (gap(p.n_g) < gap(best->n_g)) best = &p;
    } else if (p.n_g != best->n_g) {
      if (p.n_g < best->n_g) best = &p;
    } else if (len > best_len) {
      best = &p;
    }
  }
  out.chosen = *best;
  out.n_t_star = trials[best->first + (best->last - best->first) / 2].first;
  out.n_g_star = best->n_g;
  return out;
}

std::vector<std::size_t> default_trial_grid(std::size_t n_c, std::size_t n, std::size_t m) {
  if (n_c == 0 || m == 0) throw InvalidArgument("trial grid: n_c and m must be positive");
  const std::size_t hi = std::min(4 * n_c * ((n + m - 1) / m), n > 0 ? n - 1 : 0);
  std::vector<std::size_t> grid;
  for (std::size_t t = n_c; t <= hi; ++t) grid.push_back(t);
  if (grid.empty() && n_c <= n) grid.push_back(n_c);
  return grid;
}

Embedding roglc_embedding(const Rogl& r, std::size_t n0) {
  if (n0 == 0 || n0 > r.n) throw InvalidArgument("roglc: n0 must lie in [1, n]");
  std::vector<double> inv_sqrt(r.n);
  for (std::size_t i = 0; i < r.n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(r.d_tilde[i]);
  DenseMatrix sym(r.n, r.n);
  for (std::size_t j = 0; j < r.n; ++j)
    for (std::size_t i = 0; i < r.n; ++i) sym(i, j) = inv_sqrt[i] * r.l_tilde(i, j) * inv_sqrt[j];
  const EigenDecomposition eig = sym_eig(symmetrized(sym));
  Embedding e;
  e.coords = DenseMatrix(r.n, n0);
  for (std::size_t i = 0; i < r.n; ++i)
    for (std::size_t k = 0; k < n0; ++k) e.coords(i, k) = eig.vectors(i, k) * inv_sqrt[i];
  e.entity_ids.resize(r.n);
  for (std::size_t i = 0; i < r.n; ++i) e.entity_ids[i] = i;
  return e;
}

RoglcResult roglc(const Rogl& r, std::size_t n_c, std::size_t n0,
                  std::vector<std::size_t> trial_grid, std::uint64_t seed) {
  if (n_c == 0) throw InvalidArgument("roglc: n_c must be positive");
  if (trial_grid.empty()) trial_grid = default_trial_grid(n_c, r.n, r.m);
  if (trial_grid.empty())
    throw InvalidArgument("roglc: n_c = " + std::to_string(n_c) + " exceeds the reduced order " +
                          std::to_string(r.n));
  for (std::size_t t : trial_grid)
    if (t == 0 || t > r.n) throw InvalidArgument("roglc: trial n_t outside [1, n]");
  RoglcResult out;
  out.embedding = roglc_embedding(r, n0);
  out.trials.resize(trial_grid.size());
  parallel_for(
      trial_grid.size(),
      [&](std::size_t i) {
        RoglcTrial& t = out.trials[i];
        t.n_t = trial_grid[i];
        t.assignment = kmeans_pp(out.embedding, t.n_t, substream_seed(seed, "roglc", t.n_t));
        std::set<std::size_t> touched;
        for (std::size_t j = 0; j < r.m; ++j) touched.insert(t.assignment.labels[j]);
        t.n_g = touched.size();
      },
      2);
  std::vector<std::pair<std::size_t, std::size_t>> map;
  for (const auto& t : out.trials) map.emplace_back(t.n_t, t.n_g);
  out.choice = plateau_search(map, n_c);
  const auto it = std::find_if(out.trials.begin(), out.trials.end(),
                               [&](const RoglcTrial& t) { return t.n_t == out.choice.n_t_star; });
  std::vector<std::size_t> targets(it->assignment.labels.begin(),
                                   it->assignment.labels.begin() + static_cast<std::ptrdiff_t>(r.m));
  out.target_labels = canonical_labels(targets);
  return out;
}

std::vector<std::size_t> canonical_labels(const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::size_t> remap;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (std::size_t l : labels) {
    const auto [pos, fresh] = remap.emplace(l, remap.size());
    out.push_back(pos->second);
  }
  return out;
}

bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return a.size() == b.size() && canonical_labels(a) == canonical_labels(b);
}

std::vector<std::vector<int>> consistency_matrix(const std::vector<std::size_t>& a,
                                                 const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) throw InvalidArgument("consistency: labelings differ in length");
  const std::size_t n = a.size();
  std::vector<std::vector<int>> c(n, std::vector<int>(n, 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i][j] = ((a[i] == a[j]) == (b[i] == b[j])) ? 1 : 0;
  return c;
}

std::size_t recovered_communities(const std::vector<std::size_t>& predicted,
                                  const std::vector<std::size_t>& truth) {
  if (predicted.size() != truth.size())
    throw InvalidArgument("recovered communities: labelings differ in length");
  std::map<std::size_t, std::set<std::size_t>> by_truth, by_pred;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    by_truth[truth[i]].insert(i);
    by_pred[predicted[i]].insert(i);
  }
  std::size_t count = 0;
  for (const auto& [c, members] : by_truth)
    if (by_pred[predicted[*members.begin()]] == members) ++count;
  return count;
}

}  // namespace graphrom
