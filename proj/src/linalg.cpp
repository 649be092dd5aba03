#include "graphrom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "graphrom/error.hpp"

namespace graphrom {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Householder reduction of the symmetric matrix held in v to tridiagonal form.
// On exit v holds the accumulated transformation, d the diagonal and e the
// subdiagonal in e[1..n-1].
void tred2(DenseMatrix& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.rows();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), accumulating rotations into v.
void tql2(DenseMatrix& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.rows();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= kEps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) throw NumericalError("sym_eig: QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          auto vi = v.col(ii);
          auto vi1 = v.col(ii + 1);
          for (std::size_t k = 0; k < n; ++k) {
            h = vi1[k];
            vi1[k] = s * vi[k] + c * h;
            vi[k] = c * vi[k] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > kEps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

EigenDecomposition sym_eig(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("sym_eig: matrix not square");
  if (!m.all_finite()) throw InvalidArgument("sym_eig: non-finite entries");
  const std::size_t n = m.rows();
  EigenDecomposition out;
  if (n == 0) return out;

  const double scale = m.max_abs();
  double asym = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
  if (asym > 1e-8 * scale) throw InvalidArgument("sym_eig: matrix not symmetric");

  DenseMatrix v = symmetrized(m);
  std::vector<double> d(n), e(n);
  tred2(v, d, e);
  tql2(v, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    const auto src = v.col(order[k]);
    std::copy(src.begin(), src.end(), out.vectors.col(k).begin());
  }
  return out;
}

namespace {

// Thin Householder QR; returns (Q, R) with Q rows x cols and R cols x cols.
std::pair<DenseMatrix, DenseMatrix> householder_qr(const DenseMatrix& m) {
  const std::size_t r = m.rows();
  const std::size_t c = m.cols();
  DenseMatrix a = m;
  std::vector<std::vector<double>> reflectors(c);
  for (std::size_t j = 0; j < c; ++j) {
    std::vector<double> x(a.col(j).begin() + static_cast<std::ptrdiff_t>(j), a.col(j).end());
    const double nx = norm2(x);
    if (nx == 0.0) continue;
    const double alpha = x[0] > 0 ? -nx : nx;
    x[0] -= alpha;
    const double nv = norm2(x);
    if (nv == 0.0) continue;
    for (double& xi : x) xi /= nv;
    for (std::size_t k = j; k < c; ++k) {
      auto col = a.col(k).subspan(j);
      const double s = 2.0 * dot(x, col);
      axpy(-s, x, col);
    }
    reflectors[j] = std::move(x);
  }
  DenseMatrix rmat(c, c);
  for (std::size_t k = 0; k < c; ++k)
    for (std::size_t i = 0; i <= k; ++i) rmat(i, k) = a(i, k);

  DenseMatrix q(r, c);
  for (std::size_t k = 0; k < c; ++k) q(k, k) = 1.0;
  for (std::size_t j = c; j-- > 0;) {
    const auto& x = reflectors[j];
    if (x.empty()) continue;
    for (std::size_t k = 0; k < c; ++k) {
      auto col = q.col(k).subspan(j);
      const double s = 2.0 * dot(x, col);
      axpy(-s, x, col);
    }
  }
  return {std::move(q), std::move(rmat)};
}

// One-sided Jacobi on a square matrix: a <- a * w with mutually orthogonal columns.
void one_sided_jacobi(DenseMatrix& a, DenseMatrix& w) {
  const std::size_t n = a.cols();
  // Columns at the rounding level of the whole matrix cannot be resolved further.
  const double noise = kEps * a.frobenius_norm();
  const double noise2 = noise * noise;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        auto ai = a.col(i);
        auto aj = a.col(j);
        const double alpha = dot(ai, ai);
        const double beta = dot(aj, aj);
        const double gamma = dot(ai, aj);
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        if (alpha <= noise2 || beta <= noise2) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        auto rotate = [c, s](std::span<double> x, std::span<double> y) {
          for (std::size_t k = 0; k < x.size(); ++k) {
            const double xk = x[k];
            const double yk = y[k];
            x[k] = c * xk - s * yk;
            y[k] = s * xk + c * yk;
          }
        };
        rotate(ai, aj);
        rotate(w.col(i), w.col(j));
      }
    }
    if (!rotated) return;
  }
  throw NumericalError("thin_svd: Jacobi sweeps did not converge");
}

}  // namespace

SvdResult thin_svd(const DenseMatrix& m) {
  if (m.rows() < m.cols()) throw InvalidArgument("thin_svd: requires rows >= cols");
  if (!m.all_finite()) throw InvalidArgument("thin_svd: non-finite entries");
  const std::size_t c = m.cols();
  SvdResult out;
  if (c == 0) {
    out.u = DenseMatrix(m.rows(), 0);
    out.w = DenseMatrix(0, 0);
    return out;
  }

  auto [q, r] = householder_qr(m);
  DenseMatrix w = DenseMatrix::identity(c);
  one_sided_jacobi(r, w);

  std::vector<double> sig(c);
  for (std::size_t k = 0; k < c; ++k) sig[k] = norm2(r.col(k));
  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sig[a] > sig[b]; });

  DenseMatrix ur(c, c);
  out.sigma.resize(c);
  out.w = DenseMatrix(c, c);
  std::size_t next_unit = 0;
  for (std::size_t k = 0; k < c; ++k) {
    const std::size_t src = order[k];
    out.sigma[k] = sig[src];
    std::copy(w.col(src).begin(), w.col(src).end(), out.w.col(k).begin());
    auto uk = ur.col(k);
    const bool resolved = sig[src] > std::numeric_limits<double>::min();
    if (resolved) {
      for (std::size_t i = 0; i < c; ++i) uk[i] = r(i, src) / sig[src];
    }
    // Re-orthogonalize (or complete with unit vectors when the column carries no direction).
    for (int attempt = 0; attempt <= static_cast<int>(c); ++attempt) {
      if (!resolved || attempt > 0) {
        std::fill(uk.begin(), uk.end(), 0.0);
        if (next_unit >= c) throw NumericalError("thin_svd: basis completion failed");
        uk[next_unit++] = 1.0;
      }
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t p = 0; p < k; ++p) axpy(-dot(ur.col(p), uk), ur.col(p), uk);
      const double nu = norm2(uk);
      if (nu > 0.5) {
        for (double& x : uk) x /= nu;
        break;
      }
    }
  }
  out.u = matmul(q, ur);
  return out;
}

DenseMatrix spectral_apply(const EigenDecomposition& eig, const DenseMatrix& x,
                           const std::function<double(double)>& f) {
  DenseMatrix coeff = matmul_tn(eig.vectors, x);
  for (std::size_t i = 0; i < coeff.rows(); ++i) {
    const double fi = f(eig.values[i]);
    for (std::size_t j = 0; j < coeff.cols(); ++j) coeff(i, j) *= fi;
  }
  return matmul(eig.vectors, coeff);
}

DenseMatrix pinv_apply(const EigenDecomposition& eig, const DenseMatrix& x, double null_tol) {
  const double lmax = eig.values.empty() ? 0.0 : eig.values.back();
  const double cut = null_tol * lmax;
  return spectral_apply(eig, x, [cut, lmax](double l) {
    return (lmax > 0.0 && l > cut) ? 1.0 / l : 0.0;
  });
}

DenseMatrix pinv_apply_excluding(const EigenDecomposition& eig, const DenseMatrix& x,
                                 std::size_t null_count) {
  if (null_count > eig.values.size()) throw InvalidArgument("pinv: null count exceeds dimension");
  DenseMatrix coeff = matmul_tn(eig.vectors, x);
  for (std::size_t i = 0; i < coeff.rows(); ++i) {
    const double f = i < null_count ? 0.0 : 1.0 / eig.values[i];
    for (std::size_t j = 0; j < coeff.cols(); ++j) coeff(i, j) *= f;
  }
  return matmul(eig.vectors, coeff);
}

LuFactorization lu_factor(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("lu_factor: matrix not square");
  const std::size_t n = a.rows();
  LuFactorization f;
  f.lu = a;
  f.pivots.resize(n);
  const double scale = a.max_abs();
  double umin = std::numeric_limits<double>::infinity();
  double umax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(f.lu(i, k)) > std::abs(f.lu(p, k))) p = i;
    f.pivots[k] = p;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
    const double piv = f.lu(k, k);
    umin = std::min(umin, std::abs(piv));
    umax = std::max(umax, std::abs(piv));
    if (std::abs(piv) <= static_cast<double>(n) * kEps * scale) {
      f.singular = true;
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      f.lu(i, k) /= piv;
      const double lik = f.lu(i, k);
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
    }
  }
  if (n == 0 || scale == 0.0) f.singular = n > 0;
  f.pivot_ratio = umax > 0.0 ? umin / umax : 0.0;
  return f;
}

DenseMatrix lu_solve(const LuFactorization& f, const DenseMatrix& b) {
  if (f.singular) throw NumericalError("lu_solve: singular matrix");
  const std::size_t n = f.lu.rows();
  if (b.rows() != n) throw InvalidArgument("lu_solve: size mismatch");
  DenseMatrix x = b;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    auto xc = x.col(c);
    for (std::size_t k = 0; k < n; ++k)
      if (f.pivots[k] != k) std::swap(xc[k], xc[f.pivots[k]]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) xc[i] -= f.lu(i, j) * xc[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) xc[i] -= f.lu(i, j) * xc[j];
      xc[i] /= f.lu(i, i);
    }
  }
  return x;
}

DenseMatrix orthonormal_range(const DenseMatrix& m, double tol) {
  const SvdResult s = thin_svd(m);
  std::size_t rank = 0;
  const double smax = s.sigma.empty() ? 0.0 : s.sigma[0];
  while (rank < s.sigma.size() && smax > 0.0 && s.sigma[rank] > tol * smax) ++rank;
  return s.u.columns(0, rank);
}

}  // namespace graphrom
