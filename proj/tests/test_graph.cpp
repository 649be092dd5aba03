#include <cmath>
#include <sstream>

#include "doctest.h"
#include "graphrom/error.hpp"
#include "graphrom/graph.hpp"
#include "helpers.hpp"

using namespace graphrom;

namespace {

double row_sum_max(const CsrMatrix& m) {
  const std::vector<double> ones(m.rows(), 1.0);
  double worst = 0.0;
  for (double v : m.apply(ones)) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace

TEST_CASE("edge list parsing") {
  std::istringstream in("# comment\n\n1 2\n2 3 0.5\n% other comment\n3 1 2\n");
  const auto edges = parse_edge_list(in);
  REQUIRE(edges.size() == 3);
  CHECK(edges[0].w == 1.0);
  CHECK(edges[1].w == 0.5);
  CHECK(edges[2].u == 3);

  std::istringstream bad("1 2\n1 x\n");
  CHECK_THROWS_AS(parse_edge_list(bad), IoError);
  CHECK_THROWS_AS(read_edge_list("/nonexistent/graph.txt"), IoError);
}

TEST_CASE("laplacian from edge list") {
  SUBCASE("ids are remapped in numeric order and duplicates summed") {
    const std::vector<Edge> e{{10, 3, 1.0}, {3, 7, 2.0}, {10, 3, 0.5}};
    const auto g = laplacian_from_edge_list(e);
    REQUIRE(g.external_ids == std::vector<std::int64_t>{3, 7, 10});
    const auto& l = g.laplacian.entries;
    CHECK(l.at(0, 2) == doctest::Approx(-1.5));
    CHECK(l.at(0, 1) == doctest::Approx(-2.0));
    CHECK(l.at(0, 0) == doctest::Approx(3.5));
    CHECK(row_sum_max(l) < 1e-14);
  }
  SUBCASE("self-loops are dropped and counted") {
    const std::vector<Edge> e{{0, 0, 5.0}, {0, 1, 1.0}};
    const auto g = laplacian_from_edge_list(e);
    CHECK(g.self_loops_dropped == 1);
    CHECK(g.laplacian.entries.at(0, 0) == doctest::Approx(1.0));
    const std::vector<Edge> only{{2, 2, 1.0}};
    CHECK_THROWS_AS(laplacian_from_edge_list(only), InvalidArgument);
  }
  SUBCASE("directed input is symmetrized") {
    const std::vector<Edge> e{{0, 1, 2.0}, {1, 2, 1.0}, {2, 1, 3.0}};
    const auto g = laplacian_from_edge_list(e, {.directed = true});
    CHECK(g.laplacian.entries.at(0, 1) == doctest::Approx(-1.0));
    CHECK(g.laplacian.entries.at(1, 0) == doctest::Approx(-1.0));
    CHECK(g.laplacian.entries.at(1, 2) == doctest::Approx(-2.0));
  }
  SUBCASE("isolated vertices") {
    // vertex 5 only has a self-loop, so it ends up without edges
    const std::vector<Edge> e{{0, 1, 1.0}, {5, 5, 1.0}};
    const auto dropped = laplacian_from_edge_list(e);
    CHECK(dropped.laplacian.n_vertices() == 2);
    CHECK(dropped.isolated_removed == 1);
    CHECK(dropped.external_ids == std::vector<std::int64_t>{0, 1});
    const auto kept = laplacian_from_edge_list(e, {.keep_isolated = true});
    CHECK(kept.laplacian.n_vertices() == 3);
    CHECK(kept.external_ids == std::vector<std::int64_t>{0, 1, 5});
    CHECK_THROWS_AS(random_walk_normalize(kept.laplacian), InvalidArgument);
    const auto ng = random_walk_normalize(kept.laplacian, true);
    CHECK(ng.norm.d[2] == 1.0);
  }
  SUBCASE("nonpositive weights are rejected") {
    const std::vector<Edge> e{{0, 1, -1.0}};
    CHECK_THROWS_AS(laplacian_from_edge_list(e), InvalidArgument);
    const std::vector<Edge> empty;
    CHECK_THROWS_AS(laplacian_from_edge_list(empty), InvalidArgument);
  }
}

TEST_CASE("laplacian validation") {
  auto good = testutil::path_graph(4).entries.to_dense();
  CHECK_NOTHROW(validate_laplacian(CsrMatrix::from_dense(good)));

  auto asym = good;
  asym(0, 1) = -2.0;
  asym(0, 0) = 2.0;
  CHECK_THROWS_AS(validate_laplacian(CsrMatrix::from_dense(asym)), InvalidArgument);

  auto positive = good;
  positive(0, 2) = positive(2, 0) = 0.5;
  CHECK_THROWS_AS(validate_laplacian(CsrMatrix::from_dense(positive)), InvalidArgument);

  auto row_sum = good;
  row_sum(3, 3) += 1e-6;
  CHECK_THROWS_AS(validate_laplacian(CsrMatrix::from_dense(row_sum)), InvalidArgument);

  auto nan = good;
  nan(1, 1) = std::nan("");
  CHECK_THROWS_AS(validate_laplacian(CsrMatrix::from_dense(nan)), InvalidArgument);

  CHECK_THROWS_AS(validate_laplacian(CsrMatrix::from_dense(DenseMatrix(2, 3))), InvalidArgument);
}

TEST_CASE("heat kernel laplacian") {
  PointCloud2D c;
  c.tau = 0.5;
  c.points = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 2.0}};
  const auto l = heat_kernel_laplacian(c);
  const auto& e = l.entries;
  CHECK(e.at(0, 1) == doctest::Approx(-std::exp(-1.0 / 0.25)));
  CHECK(e.at(0, 2) == doctest::Approx(-std::exp(-4.0 / 0.25)));
  CHECK(e.at(1, 2) == doctest::Approx(-std::exp(-5.0 / 0.25)));
  CHECK(e.at(1, 0) == e.at(0, 1));
  CHECK(row_sum_max(e) < 1e-15);

  c.tau = 0.0;
  CHECK_THROWS_AS(heat_kernel_laplacian(c), InvalidArgument);
  c.tau = 1.0;
  c.points.resize(1);
  CHECK_THROWS_AS(heat_kernel_laplacian(c), InvalidArgument);

  std::istringstream pts("0 0\n1 1\n# x\n2 2\n");
  CHECK(parse_point_cloud(pts, 0.6).points.size() == 3);
  std::istringstream bad("0 0\n1\n");
  CHECK_THROWS_AS(parse_point_cloud(bad, 0.6), IoError);
}

TEST_CASE("normalization") {
  const auto g = testutil::ring_graph();
  const auto& a = g.a_sym;
  REQUIRE(a.rows() == 100);
  for (std::size_t i = 0; i < a.rows(); ++i) CHECK(a.at(i, i) == doctest::Approx(1.0));
  // sqrt(d) spans the nullspace of A
  std::vector<double> s(g.norm.d.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(g.norm.d[i]);
  const auto as = a.apply(s);
  CHECK(norm2(as) < 1e-13 * norm2(s));

  const auto l = testutil::path_graph(3);
  const std::vector<double> d{1.0, 2.0, 4.0};
  const auto cn = custom_normalize(l, d);
  CHECK(cn.norm.kind == Normalization::Kind::custom);
  CHECK(cn.a_sym.at(0, 1) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(cn.a_sym.at(1, 1) == doctest::Approx(1.0));
  const std::vector<double> bad{1.0, 0.0, 1.0};
  CHECK_THROWS_AS(custom_normalize(l, bad), InvalidArgument);
  const std::vector<double> short_d{1.0};
  CHECK_THROWS_AS(custom_normalize(l, short_d), InvalidArgument);
}

TEST_CASE("stability step of a normalized graph") {
  // normalized K5 is I - (J - I) / 4 with spectrum {0, 5/4}
  const auto g = random_walk_normalize(testutil::complete_graph(5));
  CHECK(spectral_norm_estimate(g.a_sym) == doctest::Approx(1.25).epsilon(1e-6));
  CHECK(stability_step(g.a_sym) == doctest::Approx(1.6).epsilon(1e-6));
}

TEST_CASE("components") {
  const auto u = disjoint_union(testutil::path_graph(3), testutil::complete_graph(4));
  REQUIRE(u.n_vertices() == 7);
  const auto labels = connected_components(u.entries);
  CHECK(labels == std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 1});
  CHECK(component_count(labels) == 2);

  auto w = u.entries.to_dense();
  w(0, 0) = 0.0;
  w(1, 1) = 1.0;
  w(0, 1) = w(1, 0) = 0.0;
  const auto r = remove_isolated(GraphLaplacian::from_matrix(CsrMatrix::from_dense(w)));
  // vertex 1 keeps its edge to 2, vertex 0 is gone
  CHECK(r.kept == std::vector<std::size_t>{1, 2, 3, 4, 5, 6});
  CHECK(r.laplacian.n_vertices() == 6);
}

TEST_CASE("target subsets") {
  CHECK_NOTHROW((TargetSubset{{0, 3}}.validate(4)));
  CHECK_THROWS_AS(TargetSubset{{}}.validate(4), InvalidArgument);
  CHECK_THROWS_AS(TargetSubset{{4}}.validate(4), InvalidArgument);
  CHECK_THROWS_AS((TargetSubset{{1, 1}}.validate(4)), InvalidArgument);
}

TEST_CASE("generators") {
  SUBCASE("two rings") {
    const auto c = two_ring_cloud(50, 1.0, 3.0, 0.05, 0.6, 7);
    REQUIRE(c.points.size() == 100);
    for (std::size_t i = 0; i < 100; ++i) {
      const double r = std::hypot(c.points[i][0], c.points[i][1]);
      CHECK(std::abs(r - (i < 50 ? 1.0 : 3.0)) <= 0.05);
    }
    const auto again = two_ring_cloud(50, 1.0, 3.0, 0.05, 0.6, 7);
    CHECK(again.points == c.points);
    CHECK_THROWS_AS(two_ring_cloud(10, 3.0, 1.0, 0.0, 0.6, 1), InvalidArgument);
  }
  SUBCASE("stochastic block model") {
    const auto sbm = stochastic_block_model({5, 7, 6}, 0.5, 0.05, 3, 0.5, 2.0);
    REQUIRE(sbm.laplacian.n_vertices() == 18);
    CHECK(sbm.community[4] == 0);
    CHECK(sbm.community[5] == 1);
    CHECK(sbm.community[17] == 2);
    CHECK_NOTHROW(validate_laplacian(sbm.laplacian.entries));
    // blocks stay internally connected even with p_in = 0
    const auto sparse = stochastic_block_model({4, 4}, 0.0, 0.0, 1);
    CHECK(component_count(connected_components(sparse.laplacian.entries)) == 2);
    CHECK_THROWS_AS((stochastic_block_model({3}, 1.5, 0.0, 1)), InvalidArgument);
  }
  SUBCASE("random connected graph") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto g = random_connected_graph(30, 0.05, seed);
      CHECK(component_count(connected_components(g.entries)) == 1);
      CHECK_NOTHROW(validate_laplacian(g.entries));
    }
    CHECK_THROWS_AS(random_connected_graph(1, 0.1, 1), InvalidArgument);
  }
}
