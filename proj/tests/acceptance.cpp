// Acceptance runs. One PASS/FAIL line per criterion; tolerances are the constants below.
//
//   acceptance              run every criterion, exit 1 if any fails
//   acceptance --criterion N   run criterion N (and what it depends on), exit 1 if it fails

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "graphrom/clustering.hpp"
#include "graphrom/error.hpp"
#include "graphrom/graph.hpp"
#include "graphrom/metrics.hpp"
#include "graphrom/rng.hpp"
#include "graphrom/rogl.hpp"
#include "graphrom/rom.hpp"

using namespace graphrom;

namespace {

// criterion 1
constexpr double kC1MaxSeconds = 5.0;
constexpr std::size_t kC1N1 = 80;
constexpr std::size_t kC1KrylovDim = 16;
constexpr std::size_t kC1PlateauMember = 12;
// criterion 2
constexpr double kC2MomentRel = 1e-7;
constexpr double kC2MaxSeconds = 10.0;
// criterion 3
constexpr double kC3RowSum = 1e-10;
constexpr double kC3MinEig = -1e-8;
constexpr double kC3DiagMatch = 1e-10;
constexpr double kC3Match = 1e-8;
const std::vector<double> kC3Lambdas{-0.1, -1.0, -10.0};
// criterion 4
constexpr std::size_t kC4P = 20;
constexpr double kC4Delta12 = 1e-10;
constexpr double kC4Delta3 = 1e-12;
constexpr double kC4Total = 1e-6;
constexpr std::size_t kC4MaxK2 = 6;
constexpr std::size_t kC4AllowedRises = 1;
// Errors at or below this are treated as converged when counting rises.
constexpr double kC4Floor = 1e-12;
constexpr double kC4MaxSeconds = 30.0;
// criterion 5
constexpr double kC5Drop = 100.0;
constexpr std::size_t kC5LateP = 50;
// criterion 7
constexpr double kC7Uniform = 1e-8;
// criterion 8
constexpr double kC8Indicator = 1e-8;
constexpr std::size_t kC8Seeds = 20;
// criterion 9
constexpr std::size_t kC9Seeds = 10;
constexpr double kC9MinRecovered = 5.0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::size_t> spread_targets(std::size_t n, std::size_t m) {
  std::vector<std::size_t> t;
  for (std::size_t j = 0; j < m; ++j) t.push_back((2 * j + 1) * n / (2 * m));
  return t;
}

GraphLaplacian path_laplacian(std::size_t n, double w) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(i + 1), w});
  return laplacian_from_edge_list(edges).laplacian;
}

bool separates(const std::vector<std::size_t>& labels, const std::vector<std::size_t>& side) {
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = a + 1; b < labels.size(); ++b)
      if (side[a] != side[b] && labels[a] == labels[b]) return false;
  return true;
}

struct Verdict {
  bool pass = true;
  std::string summary;
};

void detail(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

// ROGL runs collected by criteria 1 and 2 for criterion 3.
struct RoglRun {
  std::string label;
  RomState rom;
  Rogl rogl;
};
std::vector<RoglRun> g_runs;

Verdict criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  // the same graph as `graphrom synth` with its defaults
  const auto cloud = two_ring_cloud(50, 1.0, 3.0, 0.05, 0.6, substream_seed(1, "synth"));
  const auto g = random_walk_normalize(heat_kernel_laplacian(cloud));
  const TargetSubset s{{0, 25, 50, 75}};
  RomOptions o;
  o.k1 = 20;
  o.k2 = 4;
  o.eps = 1e-8;
  const std::uint64_t seed = 1;

  RomBuild b = build_rom(g, s, o);
  const std::size_t deflations = b.s1.lanczos.deflation_events + b.s2.lanczos.deflation_events;
  const Rogl r = build_rogl(b.rom);
  const auto vs = sample_vertices(g, s, b.rom.n, seed);
  store_sampled_rows(b.rom, b.s1, vs.vertices);
  const auto rv = rvsc_from_rom(b.rom, vs.vertices, 2, 2, seed);
  const auto rg = roglc(r, 2, 2, {}, seed);
  const auto full = rwnsc_full(g, 2, 2, seed);
  std::vector<std::size_t> full_g4;
  for (std::size_t v : s.indices) full_g4.push_back(full.labels[v]);
  const double secs = seconds_since(t0);
  g_runs.push_back({"two rings", b.rom, r});

  const auto& ch = rg.choice;
  const std::size_t lo = rg.trials[ch.chosen.first].n_t, hi = rg.trials[ch.chosen.last].n_t;
  const bool plateau_ok = ch.n_g_star == 2 && lo <= kC1PlateauMember && kC1PlateauMember <= hi;
  const bool rvsc_roglc = same_partition(rv.target_labels, rg.target_labels);
  const bool vs_full = same_partition(rg.target_labels, full_g4);
  const bool split = same_partition(full_g4, {0, 0, 1, 1});

  detail("deflations %zu, n1 %zu, Krylov dim %zu, m0 %zu, ROM order %zu", deflations, b.rom.n1,
         b.rom.krylov_dim, b.rom.m0, b.rom.n);
  detail("ROGLC plateau n_g = %zu over n_t in [%zu, %zu], n_t* = %zu", ch.n_g_star, lo, hi,
         ch.n_t_star);
  detail("partitions: rvsc = roglc %s, roglc = rwnsc|G4 %s, rwnsc splits the rings %s",
         rvsc_roglc ? "yes" : "no", vs_full ? "yes" : "no", split ? "yes" : "no");
  detail("runtime %.2f s", secs);

  Verdict v;
  v.pass = deflations == 0 && b.rom.n1 == kC1N1 && b.rom.krylov_dim == kC1KrylovDim &&
           rvsc_roglc && vs_full && split && plateau_ok && secs < kC1MaxSeconds;
  v.summary = "n1 = " + std::to_string(b.rom.n1) + ", Krylov dim = " +
              std::to_string(b.rom.krylov_dim) + " (order " + std::to_string(b.rom.n) +
              " with the null block), partitions identical, plateau n_g* = " +
              std::to_string(ch.n_g_star) + " on [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "]";
  return v;
}

Verdict criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t runs = 0, failed = 0;
  std::size_t worst_order = 0;
  for (std::size_t n : {30u, 100u})
    for (std::size_t m : {1u, 2u, 4u}) {
      const auto g = random_walk_normalize(random_connected_graph(n, 0.1, 7 * n + m));
      const auto eig = sym_eig(g.a_sym.to_dense());
      const TargetSubset s{spread_targets(n, m)};
      for (std::size_t k2 : {1u, 2u, 3u}) {
        RomOptions o;
        o.k1 = n;
        o.k2 = k2;
        o.stage1_reorth = ReorthPolicy::full();
        const RomBuild b = build_rom(g, s, o);
        const MomentReport rep = moment_check(b.rom, eig, k2);
        // the checked order drops only under deflation
        double run_worst = 0.0;
        std::size_t attained = 0;
        for (std::size_t i = 0; i < rep.rel_err.size(); ++i) {
          run_worst = std::max(run_worst, rep.rel_err[i]);
          if (attained == i && rep.rel_err[i] <= kC2MomentRel) ++attained;
        }
        const bool ok = rep.checked_order == 2 * k2 && run_worst <= kC2MomentRel;
        ++runs;
        if (!ok) ++failed;
        if (run_worst > worst) {
          worst = run_worst;
          worst_order = attained;
        }
        detail("N %3zu m %zu k2 %zu: checked %zu moments, matched %zu, worst rel err %.1e%s", n, m,
               k2, rep.checked_order, attained, run_worst, rep.deflated ? " (deflated)" : "");
        g_runs.push_back({"N " + std::to_string(n) + " m " + std::to_string(m) + " k2 " +
                              std::to_string(k2),
                          b.rom, build_rogl(b.rom)});
      }
    }
  const double secs = seconds_since(t0);
  detail("runtime %.2f s", secs);
  Verdict v;
  v.pass = failed == 0 && secs < kC2MaxSeconds;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu of %zu runs match all 2 k2 moments; worst rel err %.1e (leading moments "
                "matched there: %zu)",
                runs - failed, runs, worst, worst_order);
  v.summary = buf;
  return v;
}

Verdict criterion3() {
  std::size_t bad = 0;
  double row = 0.0, eig = 0.0, diag = 0.0, match = 0.0;
  for (const auto& run : g_runs) {
    const auto& d = run.rogl.diagnostics;
    double run_match = 0.0;
    for (double lambda : kC3Lambdas)
      run_match = std::max(run_match, match_identity_residual(run.rogl, run.rom, lambda));
    const bool ok = d.row_sum_residual <= kC3RowSum && d.min_eigenvalue_rel >= kC3MinEig &&
                    d.diag_match_residual <= kC3DiagMatch && run_match <= kC3Match;
    if (!ok) {
      ++bad;
      detail("%s: row sum %.1e, min eig %.1e, diag match %.1e, identity %.1e", run.label.c_str(),
             d.row_sum_residual, d.min_eigenvalue_rel, d.diag_match_residual, run_match);
    }
    row = std::max(row, d.row_sum_residual);
    eig = std::min(eig, d.min_eigenvalue_rel);
    diag = std::max(diag, d.diag_match_residual);
    match = std::max(match, run_match);
  }
  detail("%zu runs: max row sum %.1e, min eig %.1e, max diag match %.1e, max identity %.1e",
         g_runs.size(), row, eig, diag, match);
  Verdict v;
  v.pass = bad == 0 && !g_runs.empty();
  v.summary = std::to_string(g_runs.size() - bad) + " of " + std::to_string(g_runs.size()) +
              " ROGL runs satisfy all four structural checks";
  return v;
}

struct C4Case {
  std::string label;
  GraphLaplacian l;
};

Verdict criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<C4Case> cases;
  for (std::size_t n : {100u, 200u, 300u})
    cases.push_back({"sparse uniform N " + std::to_string(n),
                     random_connected_graph(n, 4.0 / static_cast<double>(n), n)});
  for (std::size_t n : {100u, 300u})
    cases.push_back({"denser uniform N " + std::to_string(n), random_connected_graph(n, 0.1, n + 1)});
  for (std::uint64_t seed : {1u, 2u})
    cases.push_back({"modular N 300 seed " + std::to_string(seed),
                     stochastic_block_model({60, 60, 60, 60, 60}, 0.2, 0.01, seed, 0.5, 1.5).laplacian});

  std::size_t failed = 0;
  bool exact_parts = true, totals = true, shape = true;
  for (const auto& c : cases) {
    const auto g = random_walk_normalize(c.l);
    const std::size_t n = c.l.n_vertices();
    const TargetSubset s{{1, n / 3, 2 * n / 3 + 5}};
    std::vector<double> diff_err, comm_err;
    double d1p = 0.0, d2j = 0.0, d3 = 0.0;
    for (std::size_t k2 = 1; k2 <= kC4MaxK2; ++k2) {
      RomOptions o;
      o.k1 = kC4P + 1;
      o.k2 = k2;
      o.stage1_reorth = ReorthPolicy::full();
      const RomBuild b = build_rom(g, s, o);
      const Rogl r = build_rogl(b.rom);
      const auto e = error_decomposition(g, b, r, kC4P);
      for (std::size_t i = 0; i < e.pairs.size(); ++i) {
        d1p = std::max(d1p, std::abs(e.delta1_p[i]) / e.scale_p);
        if (k2 >= 2) d2j = std::max(d2j, std::abs(e.delta2_j[i]) / e.scale_j);
        d3 = std::max({d3, std::abs(e.delta3_p[i]) / e.scale_p, std::abs(e.delta3_j[i]) / e.scale_j});
      }
      diff_err.push_back(diffusion_report(g, s, r, kC4P).max_rel_err);
      comm_err.push_back(commute_report(g, s, r).max_rel_err);
    }
    auto rises = [](const std::vector<double>& e) {
      std::size_t k = 0;
      for (std::size_t i = 1; i < e.size(); ++i)
        if (e[i] > e[i - 1] && e[i] > kC4Floor) ++k;
      return k;
    };
    const bool parts = d1p <= kC4Delta12 && d2j <= kC4Delta12 && d3 <= kC4Delta3;
    const bool total = diff_err.back() <= kC4Total && comm_err.back() <= kC4Total;
    const bool mono = rises(diff_err) <= kC4AllowedRises && rises(comm_err) <= kC4AllowedRises;
    exact_parts = exact_parts && parts;
    totals = totals && total;
    shape = shape && mono;
    if (!(parts && total && mono)) ++failed;
    std::string de, ce;
    for (std::size_t i = 0; i < diff_err.size(); ++i) {
      char buf[16];
      std::snprintf(buf, sizeof buf, " %.0e", diff_err[i]);
      de += buf;
      std::snprintf(buf, sizeof buf, " %.0e", comm_err[i]);
      ce += buf;
    }
    detail("%s: d1P %.0e d2J %.0e d3 %.0e | diffusion k2=1..6%s | commute%s %s", c.label.c_str(),
           d1p, d2j, d3, de.c_str(), ce.c_str(), parts && total && mono ? "ok" : "FAIL");
  }
  const double secs = seconds_since(t0);
  detail("runtime %.2f s", secs);
  Verdict v;
  v.pass = failed == 0 && secs < kC4MaxSeconds;
  v.summary = std::to_string(cases.size() - failed) + " of " + std::to_string(cases.size()) +
              " graphs pass; exact parts " + (exact_parts ? "hold" : "violated") +
              ", total error at k2 = 6 " + (totals ? "within 1e-6" : "above 1e-6 on some graphs") +
              ", decay shape " + (shape ? "ok" : "violated");
  return v;
}

Verdict criterion5() {
  const auto sbm = stochastic_block_model({100, 100, 100, 100, 100}, 0.1, 0.005, 1, 0.5, 1.5);
  const auto g = random_walk_normalize(sbm.laplacian);
  const TargetSubset s{{3, 150, 260, 480}};
  const std::vector<std::size_t> ps{kC5LateP, 2 * kC5LateP};
  const auto full = transfer_full(g, s, 1.0, ps);
  std::vector<double> err;
  for (std::size_t k2 = 1; k2 <= 8; ++k2) {
    RomOptions o;
    o.k1 = 40;
    o.k2 = k2;
    const RomBuild b = build_rom(g, s, o);
    const auto e = transfer_relative_errors(full, transfer_rom(b.rom, 1.0, ps));
    err.push_back(e[0]);
    detail("k2 %zu n %2zu: p=%zu %.2e  p=%zu %.2e", k2, b.rom.n, ps[0], e[0], ps[1], e[1]);
  }
  const double drop = err[1] / err[7];
  Verdict v;
  v.pass = drop >= kC5Drop;
  char buf[160];
  std::snprintf(buf, sizeof buf, "500-vertex modular graph, p = %zu: error %.1e at k2 = 2, %.1e at k2 = 8 (drop %.1e)",
                kC5LateP, err[1], err[7], drop);
  v.summary = buf;
  return v;
}

Verdict criterion6() {
  const auto big = random_connected_graph(200, 0.03, 6);
  const auto l = disjoint_union(big, path_laplacian(3, 1.0));
  const auto g = random_walk_normalize(l);
  // two targets in the big component, two in the 3-vertex component
  const TargetSubset s{{10, 120, 200, 202}};
  RomOptions o;
  o.k1 = 40;
  o.k2 = 3;
  const RomBuild b = build_rom(g, s, o);
  const std::size_t m = s.m();
  const auto labels = connected_components(g.a_sym);
  std::set<std::size_t> touched;
  for (std::size_t v : s.indices) touched.insert(labels[v]);
  detail("n1 %zu (m k1 = %zu), ROM order %zu, Krylov dim %zu (m k2 = %zu), m0 %zu, components hit %zu",
         b.rom.n1, m * o.k1, b.rom.n, b.rom.krylov_dim, m * o.k2, b.rom.m0, touched.size());
  Verdict v;
  v.pass = b.rom.n1 < m * o.k1 && b.rom.n < m * o.k2 && b.rom.m0 == touched.size();
  v.summary = "n1 = " + std::to_string(b.rom.n1) + " < " + std::to_string(m * o.k1) + ", n = " +
              std::to_string(b.rom.n) + " < " + std::to_string(m * o.k2) + ", m0 = " +
              std::to_string(b.rom.m0) + " for " + std::to_string(touched.size()) + " components";
  return v;
}

Verdict criterion7() {
  const std::size_t n = 100;
  const std::vector<double> d(n, 1.0 / static_cast<double>(n));
  const auto g = custom_normalize(path_laplacian(n, static_cast<double>(n)), d);
  auto grid_for = [&](std::size_t k2) {
    RomOptions o;
    o.k1 = n;
    o.k2 = k2;
    o.stage1_reorth = ReorthPolicy::full();
    const RomBuild b = build_rom(g, TargetSubset{{0}}, o);
    const Rogl r = build_rogl(b.rom);
    return std::make_pair(r.n, extract_optimal_grid(r.l_tilde, r.d_tilde));
  };
  const auto [n10, g10] = grid_for(10);
  double hmin = INFINITY;
  for (double h : g10.h) hmin = std::min(hmin, h);
  for (double h : g10.h_hat) hmin = std::min(hmin, h);
  const auto [nfull, gfull] = grid_for(n - 1);
  double dev = 0.0;
  for (double h : gfull.h) dev = std::max(dev, std::abs(h - 1.0 / n));
  for (double h : gfull.h_hat) dev = std::max(dev, std::abs(h - 1.0 / n));
  const double rel = dev * static_cast<double>(n);
  detail("k2 = 10: order %zu, %zu primary and %zu dual steps, smallest %.3e", n10, g10.h.size(),
         g10.h_hat.size(), hmin);
  detail("exhaustive: order %zu, max |h - 1/N| N = %.1e", nfull, rel);
  Verdict v;
  v.pass = hmin > 0.0 && nfull == n && rel <= kC7Uniform;
  char buf[160];
  std::snprintf(buf, sizeof buf, "all steps positive at k2 = 10 (min %.2e); exhaustive grid uniform to %.1e",
                hmin, rel);
  v.summary = buf;
  return v;
}

Verdict criterion8() {
  std::size_t bad_indicator = 0, bad_rvsc = 0, bad_roglc = 0;
  double worst = 0.0;
  const std::vector<std::size_t> side{0, 0, 1, 1};
  for (std::uint64_t seed = 1; seed <= kC8Seeds; ++seed) {
    const auto l = disjoint_union(random_connected_graph(60, 0.08, seed),
                                  random_connected_graph(40, 0.1, seed + 1000));
    const auto g = random_walk_normalize(l);
    const TargetSubset s{{2, 31, 64, 93}};
    RomOptions o;
    o.k1 = 25;
    o.k2 = 3;
    o.stage1_reorth = ReorthPolicy::full();
    RomBuild b = build_rom(g, s, o);
    const Rogl r = build_rogl(b.rom);
    const auto rc = reduced_nullspace_indicators(r.l_tilde);
    double res = 0.0;
    for (double x : rc.indicator_residuals) res = std::max(res, x);
    worst = std::max(worst, res);
    std::vector<std::size_t> target_comp;
    for (std::size_t t : r.reduced_target) target_comp.push_back(rc.labels[t]);
    if (res > kC8Indicator || rc.count < 2 || !separates(target_comp, side)) {
      ++bad_indicator;
      detail("seed %llu: m0 %zu, reduced components %zu, residual %.1e",
             static_cast<unsigned long long>(seed), r.m0, rc.count, res);
    }

    const auto vs = sample_vertices(g, s, b.rom.n, seed);
    store_sampled_rows(b.rom, b.s1, vs.vertices);
    if (!separates(rvsc_from_rom(b.rom, vs.vertices, 2, 2, seed).target_labels, side)) ++bad_rvsc;
    if (!separates(roglc(r, 2, 2, {}, seed).target_labels, side)) ++bad_roglc;
  }
  detail("max indicator residual %.1e; failures: indicators %zu, rvsc %zu, roglc %zu", worst,
         bad_indicator, bad_rvsc, bad_roglc);
  Verdict v;
  v.pass = bad_indicator == 0 && bad_rvsc == 0 && bad_roglc == 0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu seeds: indicators annihilated to %.1e, no cross-component co-clustering",
                kC8Seeds, worst);
  v.summary = v.pass ? buf : "cross-component structure violated on some seeds";
  return v;
}

Verdict criterion9() {
  double sum_full = 0.0, sum_rvsc = 0.0, sum_roglc = 0.0;
  std::size_t min_any = 10;
  for (std::uint64_t seed = 1; seed <= kC9Seeds; ++seed) {
    const auto sbm = stochastic_block_model(std::vector<std::size_t>(10, 30), 0.3, 0.01, seed);
    const auto g = random_walk_normalize(sbm.laplacian);
    TargetSubset s;
    Rng rng(substream_seed(seed, "subset"));
    for (std::size_t c = 0; c < 10; ++c) {
      const std::size_t a = rng.below(30);
      std::size_t b = rng.below(29);
      if (b >= a) ++b;
      s.indices.push_back(30 * c + a);
      s.indices.push_back(30 * c + b);
    }
    std::vector<std::size_t> truth;
    for (std::size_t v : s.indices) truth.push_back(sbm.community[v]);

    const auto full = rwnsc_full(g, 10, 10, seed);
    std::vector<std::size_t> full_t;
    for (std::size_t v : s.indices) full_t.push_back(full.labels[v]);
    RomOptions o;
    o.k1 = 10;
    o.k2 = 3;
    RomBuild b = build_rom(g, s, o);
    const Rogl r = build_rogl(b.rom);
    const auto vs = sample_vertices(g, s, b.rom.n, seed);
    store_sampled_rows(b.rom, b.s1, vs.vertices);
    const auto rv = rvsc_from_rom(b.rom, vs.vertices, 10, 10, seed);
    const auto rg = roglc(r, 10, 10, {}, seed);

    const std::size_t cf = recovered_communities(full_t, truth);
    const std::size_t cv = recovered_communities(rv.target_labels, truth);
    const std::size_t cr = recovered_communities(rg.target_labels, truth);
    sum_full += cf;
    sum_rvsc += cv;
    sum_roglc += cr;
    min_any = std::min({min_any, cf, cv, cr});
    detail("seed %2llu: rwnsc %zu, rvsc %zu, roglc %zu (n_t* %zu, n_g* %zu)",
           static_cast<unsigned long long>(seed), cf, cv, cr, rg.choice.n_t_star,
           rg.choice.n_g_star);
  }
  const double k = static_cast<double>(kC9Seeds);
  const double mf = sum_full / k, mv = sum_rvsc / k, mr = sum_roglc / k;
  detail("soft comparisons: roglc mean >= rwnsc mean %s, |rvsc - rwnsc| <= 1 %s",
         mr >= mf ? "yes" : "no", std::abs(mv - mf) <= 1.0 ? "yes" : "no");
  Verdict v;
  v.pass = mf >= kC9MinRecovered && mv >= kC9MinRecovered && mr >= kC9MinRecovered;
  char buf[160];
  std::snprintf(buf, sizeof buf, "mean recovered of 10: rwnsc %.1f, rvsc %.1f, roglc %.1f (min over runs %zu)",
                mf, mv, mr, min_any);
  v.summary = buf;
  return v;
}

const char* kNames[] = {"",
                        "synthetic consistency",
                        "moment matching",
                        "ROGL structure",
                        "distance preservation",
                        "convergence shape",
                        "deflation accounting",
                        "optimal grid",
                        "nullspace indicators",
                        "community recovery"};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    const int c = std::atoi(argv[2]);
    if (c < 1 || c > 9) {
      std::fprintf(stderr, "criterion must be 1..9\n");
      return 2;
    }
    wanted.insert(c);
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
    return 2;
  } else {
    for (int c = 1; c <= 9; ++c) wanted.insert(c);
  }
  // criterion 3 checks the ROGL of every run of 1 and 2
  std::set<int> run = wanted;
  if (wanted.count(3)) run.insert({1, 2});

  const std::function<Verdict()> fns[] = {nullptr,     criterion1, criterion2,
                                          criterion3,  criterion4, criterion5,
                                          criterion6,  criterion7, criterion8,
                                          criterion9};
  bool all = true;
  for (int c : run) {
    std::printf("criterion %d: %s\n", c, kNames[c]);
    Verdict v;
    try {
      v = fns[c]();
    } catch (const std::exception& e) {
      v.pass = false;
      v.summary = std::string("exception: ") + e.what();
    }
    std::printf("CRITERION %d %s  %s\n", c, v.pass ? "PASS" : "FAIL", v.summary.c_str());
    std::fflush(stdout);
    if (wanted.count(c)) all = all && v.pass;
  }
  return all ? 0 : 1;
}
