#include <cmath>
#include <vector>

#include "doctest.h"
#include "graphrom/error.hpp"
#include "graphrom/linalg.hpp"
#include "graphrom/sparse.hpp"
#include "helpers.hpp"

using namespace graphrom;
using testutil::max_abs_diff;

namespace {

void check_eig(const DenseMatrix& m, const EigenDecomposition& e) {
  const double norm = std::max(1.0, m.max_abs());
  CHECK(orthonormality_error(e.vectors) <= 1e-10);
  DenseMatrix mv = matmul(m, e.vectors);
  for (std::size_t k = 0; k < e.values.size(); ++k)
    for (std::size_t i = 0; i < m.rows(); ++i) mv(i, k) -= e.values[k] * e.vectors(i, k);
  CHECK(mv.max_abs() <= 1e-8 * norm);
  for (std::size_t k = 1; k < e.values.size(); ++k) CHECK(e.values[k - 1] <= e.values[k]);
}

}  // namespace

TEST_CASE("dense products agree with Eigen") {
  Rng rng(7);
  const auto a = testutil::random_matrix(7, 4, rng);
  const auto b = testutil::random_matrix(4, 5, rng);
  const auto c = testutil::random_matrix(7, 5, rng);
  CHECK(max_abs_diff(matmul(a, b), testutil::from_eigen(testutil::to_eigen(a) * testutil::to_eigen(b))) < 1e-13);
  CHECK(max_abs_diff(matmul_tn(a, c), testutil::from_eigen(testutil::to_eigen(a).transpose() * testutil::to_eigen(c))) < 1e-13);
  CHECK(max_abs_diff(matmul_nt(b.transpose(), b.transpose()),
                     testutil::from_eigen(testutil::to_eigen(b).transpose() * testutil::to_eigen(b))) < 1e-13);
  CHECK_THROWS_AS(matmul(a, a), InvalidArgument);
}

TEST_CASE("csr matrix merges duplicates and applies") {
  auto m = CsrMatrix::from_triplets(3, 3, {{0, 1, 1.0}, {0, 1, 2.0}, {2, 2, 4.0}, {1, 0, -1.0}});
  CHECK(m.nnz() == 3);
  CHECK(m.at(0, 1) == 3.0);
  CHECK(m.at(1, 1) == 0.0);
  const std::vector<double> x{1.0, 2.0, 3.0};
  const auto y = m.apply(x);
  CHECK(y[0] == 6.0);
  CHECK(y[1] == -1.0);
  CHECK(y[2] == 12.0);
  CHECK(max_abs_diff(CsrMatrix::from_dense(m.to_dense()).to_dense(), m.to_dense()) == 0.0);
}

TEST_CASE("sym_eig small cases") {
  SUBCASE("identity") {
    const auto e = sym_eig(DenseMatrix::identity(3));
    for (double v : e.values) CHECK(v == doctest::Approx(1.0));
  }
  SUBCASE("diagonal is sorted with permutation vectors") {
    const std::vector<double> d{3.0, 1.0, 2.0};
    const auto e = sym_eig(DenseMatrix::diagonal(d));
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(2.0));
    CHECK(e.values[2] == doctest::Approx(3.0));
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(2, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(0, 2)) == doctest::Approx(1.0));
  }
  SUBCASE("normalized path on three vertices has spectrum 0, 1, 2") {
    // diag(1,2,1), unit edges: A = D^{-1/2} L D^{-1/2}
    const double s = 1.0 / std::sqrt(2.0);
    DenseMatrix a(3, 3);
    a(0, 0) = a(1, 1) = a(2, 2) = 1.0;
    a(0, 1) = a(1, 0) = a(1, 2) = a(2, 1) = -s;
    const auto e = sym_eig(a);
    CHECK(e.values[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0));
    CHECK(e.values[2] == doctest::Approx(2.0));
    check_eig(a, e);
  }
  SUBCASE("1x1 and empty") {
    DenseMatrix one(1, 1, 5.0);
    CHECK(sym_eig(one).values[0] == 5.0);
    CHECK(sym_eig(DenseMatrix()).values.empty());
  }
}

TEST_CASE("sym_eig rejects bad input") {
  DenseMatrix a(2, 2);
  a(0, 0) = NAN;
  CHECK_THROWS_AS(sym_eig(a), InvalidArgument);
  DenseMatrix b(2, 2);
  b(0, 1) = 1.0;
  CHECK_THROWS_AS(sym_eig(b), InvalidArgument);
  CHECK_THROWS_AS(sym_eig(DenseMatrix(2, 3)), InvalidArgument);
}

TEST_CASE("sym_eig matches Eigen on random symmetric matrices") {
  Rng rng(11);
  for (std::size_t n : {2u, 5u, 17u, 60u, 150u}) {
    auto x = testutil::random_matrix(n, n, rng);
    const auto m = symmetrized(x);
    const auto e = sym_eig(m);
    check_eig(m, e);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(testutil::to_eigen(m));
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(e.values[k] - ref.eigenvalues()(k)) <= 1e-11 * m.max_abs() * n);
    double trace = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += m(i, i);
    for (double v : e.values) sum += v;
    CHECK(std::abs(trace - sum) <= 1e-8 * m.max_abs() * n);
  }
}

TEST_CASE("sym_eig handles repeated eigenvalues and graded matrices") {
  Rng rng(3);
  const auto psd = testutil::random_psd(30, 4, rng);
  const auto e = sym_eig(psd);
  check_eig(psd, e);
  for (std::size_t k = 0; k < 26; ++k) CHECK(std::abs(e.values[k]) <= 1e-10 * e.values.back());

  std::vector<double> graded;
  for (int i = 0; i < 20; ++i) graded.push_back(std::pow(10.0, -i * 0.7));
  const auto g = sym_eig(DenseMatrix::diagonal(graded));
  CHECK(g.values.front() == doctest::Approx(graded.back()).epsilon(1e-10));
}

TEST_CASE("thin_svd basic cases") {
  SUBCASE("zero matrix") {
    const auto s = thin_svd(DenseMatrix(5, 3));
    for (double v : s.sigma) CHECK(v == 0.0);
    CHECK(orthonormality_error(s.u) <= 1e-10);
  }
  SUBCASE("orthonormal input has unit singular values") {
    Rng rng(5);
    const auto q = orthonormal_range(testutil::random_matrix(8, 3, rng), 1e-12);
    const auto s = thin_svd(q);
    for (double v : s.sigma) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("rank one outer product") {
    Rng rng(9);
    const auto a = testutil::random_matrix(6, 1, rng);
    const auto b = testutil::random_matrix(4, 1, rng);
    const auto s = thin_svd(matmul_nt(a, b));
    CHECK(s.sigma[0] == doctest::Approx(norm2(a.col(0)) * norm2(b.col(0))).epsilon(1e-13));
    for (std::size_t k = 1; k < 4; ++k) CHECK(s.sigma[k] <= 1e-14 * s.sigma[0]);
    CHECK(orthonormality_error(s.u) <= 1e-10);
    CHECK(orthonormality_error(s.w) <= 1e-10);
  }
  SUBCASE("symmetric matrix with an exact null direction times an orthogonal matrix") {
    Rng rng(17);
    auto a = symmetrized(testutil::random_matrix(12, 12, rng));
    for (std::size_t i = 0; i < 12; ++i) a(i, 11) = a(11, i) = 0.0;
    const auto q = orthonormal_range(testutil::random_matrix(12, 12, rng), 1e-12);
    const auto s = thin_svd(matmul(a, q));
    CHECK(s.sigma[11] <= 1e-14 * s.sigma[0]);
    CHECK(orthonormality_error(s.u) <= 1e-10);
  }
  CHECK_THROWS_AS(thin_svd(DenseMatrix(2, 3)), InvalidArgument);
}

TEST_CASE("thin_svd reconstruction and accuracy against Eigen") {
  Rng rng(21);
  for (auto [r, c] : {std::pair<std::size_t, std::size_t>{10, 10}, {40, 6}, {200, 20}, {90, 70}}) {
    // Graded columns stress the small singular values.
    auto m = testutil::random_matrix(r, c, rng);
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t i = 0; i < r; ++i) m(i, j) *= std::pow(10.0, -static_cast<double>(j) * 0.5);
    const auto s = thin_svd(m);
    DenseMatrix us = s.u;
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t i = 0; i < r; ++i) us(i, j) *= s.sigma[j];
    CHECK(max_abs_diff(matmul_nt(us, s.w), m) <= 1e-10 * m.max_abs());
    CHECK(orthonormality_error(s.u) <= 1e-10);
    Eigen::JacobiSVD<Eigen::MatrixXd> ref(testutil::to_eigen(m));
    for (std::size_t k = 0; k < c; ++k) {
      CHECK(std::abs(s.sigma[k] - ref.singularValues()(k)) <= 1e-13 * s.sigma[0]);
      if (k > 0) CHECK(s.sigma[k - 1] >= s.sigma[k]);
    }
  }
}

TEST_CASE("pinv_apply") {
  const std::vector<double> d{2.0, 0.0};
  const auto e = sym_eig(DenseMatrix::diagonal(d));
  const std::vector<std::size_t> c0{0}, c1{1};
  const auto x1 = pinv_apply(e, DenseMatrix::unit_columns(2, c0));
  CHECK(x1(0, 0) == doctest::Approx(0.5));
  CHECK(x1(1, 0) == 0.0);
  const auto x2 = pinv_apply(e, DenseMatrix::unit_columns(2, c1));
  CHECK(x2.max_abs() == 0.0);

  // Two-vertex normalized Laplacian: commute quantity for the unit edge is 1.
  DenseMatrix a(2, 2);
  a(0, 0) = a(1, 1) = 1.0;
  a(0, 1) = a(1, 0) = -1.0;
  DenseMatrix v(2, 1);
  v(0, 0) = 1.0;
  v(1, 0) = -1.0;
  const auto y = pinv_apply(sym_eig(a), v);
  CHECK(y(0, 0) == doctest::Approx(0.5));
  CHECK(y(1, 0) == doctest::Approx(-0.5));
  CHECK(dot(v.col(0), y.col(0)) == doctest::Approx(1.0));
}

TEST_CASE("pinv_apply is a generalized inverse on random PSD matrices") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = testutil::random_psd(10, 6, rng);
    const auto e = sym_eig(m);
    const auto p = pinv_apply(e, DenseMatrix::identity(10));
    // P M P = P
    CHECK(max_abs_diff(matmul(matmul(p, m), p), p) <= 1e-8 * p.max_abs());
    // M P M = M
    CHECK(max_abs_diff(matmul(matmul(m, p), m), m) <= 1e-8 * m.max_abs());
    Eigen::MatrixXd ref = testutil::to_eigen(m).completeOrthogonalDecomposition().pseudoInverse();
    CHECK(max_abs_diff(p, testutil::from_eigen(ref)) <= 1e-7 * p.max_abs());
  }
}

TEST_CASE("lu solve") {
  Rng rng(2);
  const auto a = testutil::random_matrix(12, 12, rng);
  const auto b = testutil::random_matrix(12, 3, rng);
  const auto f = lu_factor(a);
  REQUIRE_FALSE(f.singular);
  const auto x = lu_solve(f, b);
  CHECK(max_abs_diff(matmul(a, x), b) <= 1e-10);

  DenseMatrix s(2, 2, 1.0);
  const auto fs = lu_factor(s);
  CHECK(fs.singular);
  CHECK_THROWS_AS(lu_solve(fs, DenseMatrix(2, 1)), NumericalError);
}

TEST_CASE("orthonormal_range detects rank") {
  Rng rng(4);
  const auto x = testutil::random_matrix(20, 3, rng);
  const auto m = hcat(x, matmul(x, testutil::random_matrix(3, 2, rng)));
  const auto q = orthonormal_range(m, 1e-10);
  CHECK(q.cols() == 3);
  CHECK(orthonormality_error(q) <= 1e-12);
}
