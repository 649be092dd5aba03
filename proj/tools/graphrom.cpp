// graphrom: command-line front end for the reduction and clustering pipeline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "graphrom/clustering.hpp"
#include "graphrom/error.hpp"
#include "graphrom/graph.hpp"
#include "graphrom/metrics.hpp"
#include "graphrom/rng.hpp"
#include "graphrom/rogl.hpp"
#include "graphrom/rom.hpp"
#include "graphrom/serialize.hpp"

namespace fs = std::filesystem;
using namespace graphrom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct RunConfig {
  std::string edges_path;
  std::string points_path;
  bool directed = false;
  bool keep_isolated = false;

  // Synthetic two-ring cloud.
  std::size_t per_ring = 50;
  double r_inner = 1.0;
  double r_outer = 3.0;
  double jitter = 0.05;
  double tau = 0.6;

  std::vector<std::int64_t> targets;
  std::size_t targets_per_cluster = 0;

  std::size_t k1 = 20;
  std::size_t k2 = 4;
  double eps = 1e-8;
  double null_tol = 1e-8;
  std::string stage1_reorth = "selective";
  std::size_t n0 = 2;
  std::size_t n_c = 2;
  std::size_t n_s = 0;
  std::string tau_step = "1";
  std::vector<std::size_t> p_values{10, 50, 100};
  std::vector<std::size_t> sweep_k1;
  std::size_t k2_max = 8;
  std::string nt_grid = "auto";
  std::string method = "roglc";
  std::string reference;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool include_q12 = false;
};

struct LoadedGraph {
  GraphLaplacian laplacian;
  NormalizedGraph g;
  std::vector<std::int64_t> external_ids;
  std::size_t self_loops_dropped = 0;
  std::size_t isolated_removed = 0;
  std::string source;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::int64_t> identity_ids(std::size_t n) {
  std::vector<std::int64_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::int64_t>(i);
  return ids;
}

PointCloud2D synthetic_cloud(const RunConfig& c) {
  if (!(c.tau > 0.0)) throw UsageError("tau must be positive");
  return two_ring_cloud(c.per_ring, c.r_inner, c.r_outer, c.jitter, c.tau,
                        substream_seed(c.seed, "synth"));
}

LoadedGraph load_graph(const RunConfig& c) {
  if (!c.edges_path.empty() && !c.points_path.empty())
    throw UsageError("give at most one of --edges and --points");
  LoadedGraph lg;
  if (!c.edges_path.empty()) {
    const auto edges = read_edge_list(c.edges_path);
    EdgeListOptions opts;
    opts.directed = c.directed;
    opts.keep_isolated = c.keep_isolated;
    IngestedGraph ig = laplacian_from_edge_list(edges, opts);
    lg.laplacian = std::move(ig.laplacian);
    lg.external_ids = std::move(ig.external_ids);
    lg.self_loops_dropped = ig.self_loops_dropped;
    lg.isolated_removed = ig.isolated_removed;
    lg.source = c.edges_path;
  } else {
    if (!(c.tau > 0.0)) throw UsageError("tau must be positive");
    const PointCloud2D cloud =
        c.points_path.empty() ? synthetic_cloud(c) : read_point_cloud(c.points_path, c.tau);
    lg.laplacian = heat_kernel_laplacian(cloud);
    lg.external_ids = identity_ids(cloud.points.size());
    lg.source = c.points_path.empty() ? "synthetic" : c.points_path;
  }
  lg.g = random_walk_normalize(lg.laplacian, c.keep_isolated);
  return lg;
}

void check_config(const RunConfig& c) {
  if (c.k1 == 0 || c.k2 == 0) throw UsageError("k1 and k2 must be positive");
  if (c.k2 > c.k1) throw UsageError("k2 must not exceed k1");
  if (!(c.eps > 0.0) || !(c.null_tol > 0.0)) throw UsageError("eps and null-tol must be positive");
  if (c.n0 == 0 || c.n_c == 0) throw UsageError("n0 and n_c must be positive");
  if (c.per_ring == 0) throw UsageError("per-ring must be positive");
}

TargetSubset resolve_targets(const RunConfig& c, const LoadedGraph& lg) {
  TargetSubset s;
  const std::size_t n = lg.g.a_sym.rows();
  if (!c.targets.empty() && c.targets_per_cluster > 0)
    throw UsageError("give either --targets or --targets-per-cluster");
  if (!c.targets.empty()) {
    std::map<std::int64_t, std::size_t> index;
    for (std::size_t i = 0; i < lg.external_ids.size(); ++i) index[lg.external_ids[i]] = i;
    for (std::int64_t t : c.targets) {
      const auto it = index.find(t);
      if (it == index.end()) throw UsageError("target id " + std::to_string(t) + " not in graph");
      s.indices.push_back(it->second);
    }
  } else if (c.targets_per_cluster > 0) {
    const ClusterAssignment ref = rwnsc_full(lg.g, c.n_c, c.n0, c.seed);
    Rng rng(substream_seed(c.seed, "subset"));
    for (std::size_t cl = 0; cl < c.n_c; ++cl) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (ref.labels[i] == cl) members.push_back(i);
      const std::size_t take = std::min(c.targets_per_cluster, members.size());
      for (std::size_t i = 0; i < take; ++i) {
        std::swap(members[i], members[i + rng.below(members.size() - i)]);
        s.indices.push_back(members[i]);
      }
    }
  } else if (c.edges_path.empty() && c.points_path.empty()) {
    // Two opposite points on each ring.
    const std::size_t h = c.per_ring / 2;
    s.indices = {0, h, c.per_ring, c.per_ring + h};
  } else {
    throw UsageError("a target subset is required (--targets or --targets-per-cluster)");
  }
  s.validate(n);
  return s;
}

RomOptions rom_options(const RunConfig& c) {
  RomOptions o;
  o.k1 = c.k1;
  o.k2 = c.k2;
  o.eps = c.eps;
  o.null_tol = c.null_tol;
  if (c.stage1_reorth == "full")
    o.stage1_reorth = ReorthPolicy::full();
  else if (c.stage1_reorth == "none")
    o.stage1_reorth = ReorthPolicy::none();
  else if (c.stage1_reorth == "selective")
    o.stage1_reorth = ReorthPolicy::selective();
  else
    throw UsageError("stage1-reorth must be none, full or selective");
  return o;
}

double resolve_tau_step(const RunConfig& c, const NormalizedGraph& g) {
  if (c.tau_step == "stable") return stability_step(g.a_sym);
  try {
    std::size_t used = 0;
    const double t = std::stod(c.tau_step, &used);
    if (used != c.tau_step.size() || !(t > 0.0)) throw std::invalid_argument("bad");
    return t;
  } catch (const std::exception&) {
    throw UsageError("tau-step must be a positive number or 'stable'");
  }
}

std::vector<std::size_t> parse_grid(const std::string& spec) {
  if (spec == "auto") return {};
  const auto colon = spec.find(':');
  try {
    if (colon == std::string::npos) {
      std::vector<std::size_t> out;
      std::stringstream ss(spec);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
      return out;
    }
    const std::size_t lo = std::stoul(spec.substr(0, colon));
    const std::size_t hi = std::stoul(spec.substr(colon + 1));
    if (lo == 0 || hi < lo) throw std::invalid_argument("range");
    std::vector<std::size_t> out;
    for (std::size_t t = lo; t <= hi; ++t) out.push_back(t);
    return out;
  } catch (const std::exception&) {
    throw UsageError("nt-grid must be 'auto', 'lo:hi' or a comma list");
  }
}

fs::path out_path(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / name;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

void emit(const RunConfig& c, const std::string& name, const std::string& text) {
  write_text_file(out_path(c, name).string(), text);
  std::cout << text;
}

// --- commands --------------------------------------------------------------------------

int cmd_synth(const RunConfig& c) {
  const PointCloud2D cloud = synthetic_cloud(c);
  std::ostringstream pts;
  for (const auto& p : cloud.points) pts << format_double(p[0]) << ' ' << format_double(p[1]) << '\n';
  write_text_file(out_path(c, "points.txt").string(), pts.str());
  const GraphLaplacian l = heat_kernel_laplacian(cloud);
  std::ostringstream edges;
  edges << "# heat kernel, tau " << format_double(cloud.tau) << '\n';
  const auto& m = l.entries;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      const std::size_t j = m.col_idx()[k];
      if (j > i) edges << i << ' ' << j << ' ' << format_double(-m.values()[k]) << '\n';
    }
  write_text_file(out_path(c, "graph.txt").string(), edges.str());
  std::cout << "points " << cloud.points.size() << " tau " << format_double(cloud.tau)
            << " -> " << out_path(c, "points.txt").string() << ", "
            << out_path(c, "graph.txt").string() << '\n';
  return kExitOk;
}

int cmd_build(const RunConfig& c) {
  const LoadedGraph lg = load_graph(c);
  const auto labels = connected_components(lg.g.a_sym);
  Json j;
  j["format"] = "graphrom.graph";
  j["version"] = kFormatVersion;
  j["source"] = lg.source;
  j["n_vertices"] = lg.g.a_sym.rows();
  j["nnz"] = lg.laplacian.entries.nnz();
  j["components"] = component_count(labels);
  j["self_loops_dropped"] = lg.self_loops_dropped;
  j["isolated_removed"] = lg.isolated_removed;
  j["external_ids"] = lg.external_ids;
  write_json_file(out_path(c, "graph.json").string(), j);
  std::cout << "vertices " << lg.g.a_sym.rows() << " nnz " << lg.laplacian.entries.nnz()
            << " components " << component_count(labels) << " self_loops_dropped "
            << lg.self_loops_dropped << " isolated_removed " << lg.isolated_removed << '\n';
  return kExitOk;
}

int cmd_rom(const RunConfig& c) {
  const LoadedGraph lg = load_graph(c);
  const TargetSubset s = resolve_targets(c, lg);
  RomOptions opts = rom_options(c);
  RomBuild b = build_rom(lg.g, s, opts);
  print_warnings(b.warnings);
  const std::size_t ns = c.n_s == 0 ? b.rom.n : c.n_s;
  const VertexSample sample = sample_vertices(lg.g, s, ns, c.seed);
  print_warnings(sample.warnings);
  store_sampled_rows(b.rom, b.s1, sample.vertices);
  write_json_file(out_path(c, "rom.json").string(), rom_to_json(b.rom, c.include_q12));

  const double tau = resolve_tau_step(c, lg.g);
  const TransferSamples full = transfer_full(lg.g, s, tau, c.p_values);
  print_warnings(full.warnings);
  std::ostringstream t;
  t << "# N " << b.rom.n_vertices << " m " << b.rom.m << " n1 " << b.rom.n1 << " m0 " << b.rom.m0
    << " krylov_dim " << b.rom.krylov_dim << " n " << b.rom.n << " deflations "
    << b.s1.lanczos.deflation_events + b.s2.lanczos.deflation_events << '\n';
  t << "# transfer relative error, tau_step " << format_double(tau) << '\n';
  t << "# k1 k2 n";
  for (std::size_t p : full.p_values) t << " p=" << p;
  t << '\n';
  std::vector<std::size_t> k1s = c.sweep_k1.empty() ? std::vector<std::size_t>{c.k1} : c.sweep_k1;
  for (std::size_t k1 : k1s)
    for (std::size_t k2 = 1; k2 <= std::min(c.k2, k1); ++k2) {
      RomOptions o = opts;
      o.k1 = k1;
      o.k2 = k2;
      const RomBuild bk = build_rom(lg.g, s, o);
      const auto errs = transfer_relative_errors(full, transfer_rom(bk.rom, tau, c.p_values));
      t << k1 << ' ' << k2 << ' ' << bk.rom.n;
      for (double e : errs) t << ' ' << format_double(e);
      t << '\n';
    }
  emit(c, "rom_convergence.txt", t.str());
  return kExitOk;
}

int cmd_rogl(const RunConfig& c) {
  const LoadedGraph lg = load_graph(c);
  const TargetSubset s = resolve_targets(c, lg);
  const RomBuild b = build_rom(lg.g, s, rom_options(c));
  print_warnings(b.warnings);
  const Rogl r = build_rogl(b.rom);
  write_json_file(out_path(c, "rogl.json").string(), rogl_to_json(r, lg.external_ids));
  const auto& d = r.diagnostics;
  std::ostringstream t;
  t << "n " << r.n << '\n'
    << "m " << r.m << '\n'
    << "m0 " << r.m0 << '\n'
    << "row_sum_residual " << format_double(d.row_sum_residual) << '\n'
    << "min_eigenvalue_rel " << format_double(d.min_eigenvalue_rel) << '\n'
    << "diag_match_residual " << format_double(d.diag_match_residual) << '\n'
    << "assumption2_margin " << format_double(d.assumption2_margin) << '\n'
    << "z0_consistency " << format_double(d.z0_consistency) << '\n';
  for (double lambda : {-0.1, -1.0, -10.0})
    t << "match_residual(" << format_double(lambda) << ") "
      << format_double(match_identity_residual(r, b.rom, lambda)) << '\n';
  t << "ghost_ratio";
  for (double g : d.ghost_ratio) t << ' ' << format_double(g);
  t << '\n';
  if (r.m == 1) {
    const OptimalGrid1D grid = extract_optimal_grid(r.l_tilde, r.d_tilde);
    write_json_file(out_path(c, "grid1d.json").string(), grid_to_json(grid));
    t << "grid1d " << out_path(c, "grid1d.json").string() << '\n';
  }
  emit(c, "rogl_diagnostics.txt", t.str());
  return kExitOk;
}

std::map<std::int64_t, std::int64_t> read_reference(const std::string& path) {
  const Json j = read_json_file(path);
  const Json& labels = j.contains("labels") ? j.at("labels") : j;
  if (!labels.is_object()) throw IoError(path + ": expected an object of vertex -> cluster");
  std::map<std::int64_t, std::int64_t> out;
  try {
    for (const auto& [k, v] : labels.items()) out[std::stoll(k)] = v.get<std::int64_t>();
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return out;
}

int cmd_cluster(const RunConfig& c) {
  const LoadedGraph lg = load_graph(c);
  const TargetSubset s = resolve_targets(c, lg);
  ClusterReport rep;
  rep.method = c.method;
  rep.n_c = c.n_c;
  rep.seed = c.seed;
  rep.vertices = s.indices;
  if (c.method == "rwnsc") {
    if (lg.g.a_sym.rows() > 3000)
      throw UsageError("rwnsc needs a dense eigendecomposition; graph has more than 3000 vertices");
    const ClusterAssignment a = rwnsc_full(lg.g, c.n_c, c.n0, c.seed);
    for (std::size_t v : s.indices) rep.labels.push_back(a.labels[v]);
    rep.labels = canonical_labels(rep.labels);
    rep.inertia = a.inertia;
  } else if (c.method == "rvsc") {
    const SubsetClustering sc = rvsc(lg.g, s, c.n_c, c.n0, c.n_s, rom_options(c), c.seed);
    rep.labels = canonical_labels(sc.target_labels);
    rep.inertia = sc.assignment.inertia;
  } else if (c.method == "roglc") {
    const RomBuild b = build_rom(lg.g, s, rom_options(c));
    print_warnings(b.warnings);
    const Rogl r = build_rogl(b.rom);
    const RoglcResult res = roglc(r, c.n_c, c.n0, parse_grid(c.nt_grid), c.seed);
    rep.labels = res.target_labels;
    for (const auto& t : res.trials) rep.trials.emplace_back(t.n_t, t.n_g);
    rep.n_t_star = res.choice.n_t_star;
    rep.n_g_star = res.choice.n_g_star;
    for (const auto& t : res.trials)
      if (t.n_t == rep.n_t_star) rep.inertia = t.assignment.inertia;
  } else {
    throw UsageError("method must be rvsc, roglc or rwnsc");
  }
  write_json_file(out_path(c, "clusters_" + c.method + ".json").string(),
                  cluster_report_to_json(rep, lg.external_ids));
  std::ostringstream t;
  t << cluster_report_table(rep);
  if (!c.reference.empty()) {
    const auto ref = read_reference(c.reference);
    std::vector<std::size_t> ref_labels;
    std::map<std::int64_t, std::size_t> dense;
    for (std::size_t v : s.indices) {
      const auto it = ref.find(lg.external_ids[v]);
      if (it == ref.end())
        throw IoError("reference labeling has no entry for vertex " +
                      std::to_string(lg.external_ids[v]));
      ref_labels.push_back(dense.emplace(it->second, dense.size()).first->second);
    }
    const auto cm = consistency_matrix(rep.labels, ref_labels);
    std::size_t agree = 0, total = 0;
    t << "# consistency with reference (1 = same-cluster/split agreement)\n";
    for (std::size_t i = 0; i < cm.size(); ++i) {
      for (std::size_t j = 0; j < cm.size(); ++j) {
        t << (j ? " " : "") << cm[i][j];
        if (i < j) {
          agree += static_cast<std::size_t>(cm[i][j]);
          ++total;
        }
      }
      t << '\n';
    }
    t << "# pair agreement " << agree << '/' << total << " identical_partition "
      << (same_partition(rep.labels, ref_labels) ? "yes" : "no") << '\n';
  }
  emit(c, "clusters_" + c.method + ".txt", t.str());
  return kExitOk;
}

int cmd_distances(const RunConfig& c) {
  const LoadedGraph lg = load_graph(c);
  const TargetSubset s = resolve_targets(c, lg);
  const RomBuild b = build_rom(lg.g, s, rom_options(c));
  print_warnings(b.warnings);
  const Rogl r = build_rogl(b.rom);
  Json all = Json::array();
  std::ostringstream t;
  double worst = 0.0;
  for (std::size_t p : c.p_values) {
    const DistanceReport rep = diffusion_report(lg.g, s, r, p);
    all.push_back(distance_report_to_json(rep, s, lg.external_ids));
    t << distance_report_table(rep);
    worst = std::max(worst, rep.max_rel_err);
  }
  const DistanceReport cr = commute_report(lg.g, s, r);
  all.push_back(distance_report_to_json(cr, s, lg.external_ids));
  t << distance_report_table(cr);
  worst = std::max(worst, cr.max_rel_err);
  t << "# overall max_rel_err " << format_double(worst) << '\n';
  write_json_file(out_path(c, "distances.json").string(),
                  Json{{"format", "graphrom.distance_set"},
                       {"version", kFormatVersion},
                       {"reports", all}});
  emit(c, "distances.txt", t.str());
  return kExitOk;
}

int cmd_sweep(const RunConfig& c) {
  const LoadedGraph lg = load_graph(c);
  const TargetSubset s = resolve_targets(c, lg);
  const double tau = resolve_tau_step(c, lg.g);
  const TransferSamples full = transfer_full(lg.g, s, tau, c.p_values);
  std::ostringstream t;
  t << "# k1 " << c.k1 << " tau_step " << format_double(tau) << '\n';
  t << "# k2 n";
  for (std::size_t p : full.p_values) t << " transfer_p=" << p;
  for (std::size_t p : full.p_values) t << " diffusion_p=" << p;
  t << " commute\n";
  for (std::size_t k2 = 1; k2 <= std::min(c.k2_max, c.k1); ++k2) {
    RomOptions o = rom_options(c);
    o.k2 = k2;
    const RomBuild b = build_rom(lg.g, s, o);
    t << k2 << ' ' << b.rom.n;
    for (double e : transfer_relative_errors(full, transfer_rom(b.rom, tau, c.p_values)))
      t << ' ' << format_double(e);
    try {
      const Rogl r = build_rogl(b.rom);
      for (std::size_t p : full.p_values)
        t << ' ' << format_double(diffusion_report(lg.g, s, r, p).max_rel_err);
      t << ' ' << format_double(commute_report(lg.g, s, r).max_rel_err) << '\n';
    } catch (const AssumptionViolation& e) {
      t << " # " << e.what() << '\n';
    }
  }
  emit(c, "sweep.txt", t.str());
  return kExitOk;
}

void add_options(CLI::App& app, RunConfig& c) {
  app.add_option("--edges", c.edges_path, "Edge list \"u v [w]\" per line");
  app.add_option("--points", c.points_path, "Point cloud \"x y\" per line (heat kernel)");
  app.add_flag("--directed", c.directed, "Symmetrize the edge list as (W + W^T)/2");
  app.add_flag("--keep-isolated", c.keep_isolated, "Keep isolated vertices with d = 1");
  app.add_option("--per-ring", c.per_ring, "Synthetic points per ring")->capture_default_str();
  app.add_option("--r-inner", c.r_inner, "Synthetic inner radius")->capture_default_str();
  app.add_option("--r-outer", c.r_outer, "Synthetic outer radius")->capture_default_str();
  app.add_option("--jitter", c.jitter, "Synthetic radial jitter")->capture_default_str();
  app.add_option("--tau", c.tau, "Heat-kernel width")->capture_default_str();
  app.add_option("--targets", c.targets, "Target vertex ids")->delimiter(',');
  app.add_option("--targets-per-cluster", c.targets_per_cluster,
                 "Random targets per reference (full-graph) cluster");
  app.add_option("--k1", c.k1, "Stage-one block steps")->capture_default_str();
  app.add_option("--k2", c.k2, "Stage-two block steps")->capture_default_str();
  app.add_option("--eps", c.eps, "Deflation tolerance")->capture_default_str();
  app.add_option("--null-tol", c.null_tol, "Nullspace tolerance of T1")->capture_default_str();
  app.add_option("--stage1-reorth", c.stage1_reorth, "none | full | selective")
      ->capture_default_str();
  app.add_option("--n0", c.n0, "Embedding dimension")->capture_default_str();
  app.add_option("--nc", c.n_c, "Number of clusters")->capture_default_str();
  app.add_option("--ns", c.n_s, "Sampled vertices for rvsc (0: ROM order)")->capture_default_str();
  app.add_option("--tau-step", c.tau_step, "Transfer time step or 'stable'")->capture_default_str();
  app.add_option("--p", c.p_values, "Diffusion times")->delimiter(',')->capture_default_str();
  app.add_option("--sweep-k1", c.sweep_k1, "k1 values of the rom convergence table")
      ->delimiter(',');
  app.add_option("--k2-max", c.k2_max, "Largest k2 of the sweep")->capture_default_str();
  app.add_option("--nt-grid", c.nt_grid, "ROGLC trial grid: auto | lo:hi | a,b,c")
      ->capture_default_str();
  app.add_option("--method", c.method, "rvsc | roglc | rwnsc")->capture_default_str();
  app.add_option("--reference", c.reference, "Reference labeling JSON {vertex: cluster}");
  app.add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app.add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  app.add_flag("--include-q12", c.include_q12, "Store full Ritz basis rows in rom.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance-preserving reduction of graph Laplacians and subset clustering"};
  app.set_config("--config", "", "Configuration file (TOML/INI keys are long option names)");
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  add_options(app, cfg);

  std::string command;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"synth", "Generate the two-ring point cloud and its heat-kernel graph"},
      {"build", "Ingest a graph and report its structure"},
      {"rom", "Two-stage reduced model and transfer-function convergence table"},
      {"rogl", "Reduced-order graph Laplacian and diagnostics"},
      {"cluster", "Cluster the target subset (--method rvsc|roglc|rwnsc)"},
      {"distances", "Diffusion and commute distances, full vs reduced"},
      {"sweep", "Errors as a function of k2"}};
  for (const auto& [name, help] : commands)
    app.add_subcommand(name, help)->callback([&command, name = name] { command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    check_config(cfg);
    if (command == "synth") return cmd_synth(cfg);
    if (command == "build") return cmd_build(cfg);
    if (command == "rom") return cmd_rom(cfg);
    if (command == "rogl") return cmd_rogl(cfg);
    if (command == "cluster") return cmd_cluster(cfg);
    if (command == "distances") return cmd_distances(cfg);
    if (command == "sweep") return cmd_sweep(cfg);
    throw UsageError("unknown command");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AssumptionViolation& e) {
    std::cerr << "assumption " << e.assumption() << " violated at index " << e.index() << ": "
              << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
}
