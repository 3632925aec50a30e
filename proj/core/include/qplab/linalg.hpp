#pragma once

#include <cmath>
#include <stdexcept>

#include "qplab/types.hpp"

namespace qplab {

template <class S> S trace(const MatT<S>& m) {
  S t(0.0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

template <class S> MatT<S> identity(Eigen::Index n) {
  MatT<S> out = MatT<S>::Constant(n, n, S(0.0));
  for (Eigen::Index i = 0; i < n; ++i) out(i, i) = S(1.0);
  return out;
}

template <class S> MatT<S> zeros(Eigen::Index r, Eigen::Index c) { return MatT<S>::Constant(r, c, S(0.0)); }

// Gauss-Jordan with partial pivoting on the primal magnitude; works for any
// scalar with field operations, so derivatives pass through exactly.
template <class S> MatT<S> inverse(const MatT<S>& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inverse: non-square matrix");
  MatT<S> m = a;
  MatT<S> inv = identity<S>(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    double best = mag(m(c, c));
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (mag(m(r, c)) > best) { best = mag(m(r, c)); p = r; }
    if (best == 0.0) throw std::domain_error("inverse: singular matrix");
    if (p != c) { m.row(p).swap(m.row(c)); inv.row(p).swap(inv.row(c)); }
    S piv = S(1.0) / m(c, c);
    m.row(c) *= piv;
    inv.row(c) *= piv;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c) continue;
      S f = m(r, c);
      m.row(r) -= f * m.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

// Cofactor expansion for small sizes keeps derivatives exact even where the
// primal matrix is singular (minors of boundary points).
template <class S> S determinant(const MatT<S>& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return S(1.0);
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  if (n <= 5) {
    S det(0.0);
    MatT<S> minor(n - 1, n - 1);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index r = 1; r < n; ++r)
        for (Eigen::Index c = 0, cc = 0; c < n; ++c)
          if (c != j) minor(r - 1, cc++) = a(r, c);
      S term = a(0, j) * determinant<S>(minor);
      det += (j % 2 == 0) ? term : S(-term);
    }
    return det;
  }
  MatT<S> m = a;
  S det(1.0);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    double best = mag(m(c, c));
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (mag(m(r, c)) > best) { best = mag(m(r, c)); p = r; }
    if (best == 0.0) return S(0.0);
    if (p != c) { m.row(p).swap(m.row(c)); det = -det; }
    det *= m(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      S f = m(r, c) / m(c, c);
      m.row(r) -= f * m.row(c);
    }
  }
  return det;
}

// Scaling and squaring with a truncated Taylor series. The squaring count
// depends only on the primal norm, so duals see a fixed polynomial.
template <class S> MatT<S> expm(const MatT<S>& x) {
  const Eigen::Index n = x.rows();
  double nrm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) row += mag(x(i, j));
    nrm = std::max(nrm, row);
  }
  int sq = 0;
  if (nrm > 0.5) sq = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  MatT<S> a = x * S(std::ldexp(1.0, -sq));
  MatT<S> term = identity<S>(n);
  MatT<S> sum = identity<S>(n);
  for (int k = 1; k <= 20; ++k) {
    term = (term * a).eval() * S(1.0 / k);
    sum += term;
  }
  for (int i = 0; i < sq; ++i) sum = (sum * sum).eval();
  return sum;
}

template <class S> MatT<S> commutator(const MatT<S>& a, const MatT<S>& b) { return a * b - b * a; }

// Jacobian of a vector map at x, one dual direction per column.
template <class F> Mat jacobian(F&& f, const Vec& x) {
  Mat jac;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    VecT<D1> y = f(seed_axis<cd>(x, k));
    if (k == 0) jac.resize(y.size(), x.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) jac(i, k) = y(i).d;
  }
  return jac;
}

// Same, lifted one dual level: the input already carries a derivative.
template <class T, class F> MatT<T> jacobian_t(F&& f, const VecT<T>& x) {
  MatT<T> jac;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    VecT<Dual<T>> y = f(seed_axis<T>(x, k));
    if (k == 0) jac.resize(y.size(), x.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) jac(i, k) = y(i).d;
  }
  return jac;
}

// Numerical subspace tools (SVD based, Hermitian geometry on C^d).
int rank(const Mat& m, double rel = kRankTol);
// singular values above rel * max(s_0, scale); counts a tiny matrix as rank 0
int rank_scaled(const Mat& m, double rel = kRankTol, double scale = 1.0);
Mat nullspace(const Mat& m, double rel = kRankTol);
Mat column_space(const Mat& m, double rel = kRankTol);
Mat pinv(const Mat& m, double rel = 1e-12);
// Spectral-norm distance between the orthogonal projectors onto col(a), col(b).
double subspace_distance(const Mat& a, const Mat& b, double rel = kRankTol);
// Relative residual of v outside col(basis).
double residual_outside(const Mat& basis, const Mat& v, double rel = kRankTol);
double max_abs(const Mat& m);

}  // namespace qplab
