#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "qplab/dual.hpp"

namespace qplab {

template <class S> using MatT = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S> using VecT = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using Mat = MatT<cd>;
using Vec = VecT<cd>;
using RMat = Eigen::MatrixXd;

inline constexpr cd I_unit{0.0, 1.0};

// Rank decisions: singular values below rel * sigma_max count as zero.
inline constexpr double kRankTol = 1e-7;

template <class S> MatT<S> lift(const Mat& m) { return m.template cast<S>(); }
template <class S> VecT<S> lift(const Vec& v) { return v.template cast<S>(); }

template <class S> Mat primal(const MatT<S>& m) {
  Mat out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = value(m(i, j));
  return out;
}

// Dense 3-index array (k-vectors and 3-forms in wedge coordinates).
struct Array3 {
  int d = 0;
  std::vector<cd> a;
  Array3() = default;
  explicit Array3(int dim) : d(dim), a(static_cast<size_t>(dim) * dim * dim, cd(0.0)) {}
  cd& operator()(int i, int j, int k) { return a[(static_cast<size_t>(i) * d + j) * d + k]; }
  const cd& operator()(int i, int j, int k) const { return a[(static_cast<size_t>(i) * d + j) * d + k]; }
  double max_abs() const {
    double m = 0.0;
    for (const cd& x : a) m = std::max(m, std::abs(x));
    return m;
  }
};

inline double max_abs_diff(const Array3& x, const Array3& y) {
  double m = 0.0;
  for (size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
  return m;
}

// Contract every slot with the columns of f (d x k): out(p,q,r) = t(i,j,l) f(i,p) f(j,q) f(l,r).
inline Array3 contract(const Array3& t, const Mat& f) {
  const int d = t.d;
  const int k = static_cast<int>(f.cols());
  Array3 out(k);
  std::vector<cd> tmp1(static_cast<size_t>(k) * d * d), tmp2(static_cast<size_t>(k) * k * d);
  for (int p = 0; p < k; ++p)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) {
        cd s(0.0);
        for (int i = 0; i < d; ++i) s += t(i, j, l) * f(i, p);
        tmp1[(static_cast<size_t>(p) * d + j) * d + l] = s;
      }
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q)
      for (int l = 0; l < d; ++l) {
        cd s(0.0);
        for (int j = 0; j < d; ++j) s += tmp1[(static_cast<size_t>(p) * d + j) * d + l] * f(j, q);
        tmp2[(static_cast<size_t>(p) * k + q) * d + l] = s;
      }
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q)
      for (int r = 0; r < k; ++r) {
        cd s(0.0);
        for (int l = 0; l < d; ++l) s += tmp2[(static_cast<size_t>(p) * k + q) * d + l] * f(l, r);
        out(p, q, r) = s;
      }
  return out;
}

// Derivative part of a matrix of first-order duals.
template <class T> MatT<T> tangent(const MatT<Dual<T>>& m) {
  MatT<T> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).d;
  return out;
}
template <class T> MatT<T> base(const MatT<Dual<T>>& m) {
  MatT<T> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).v;
  return out;
}

// Seeds x + eps * dir.
template <class T> VecT<Dual<T>> seed(const VecT<T>& x, const VecT<T>& dir) {
  VecT<Dual<T>> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = Dual<T>(x(i), dir(i));
  return out;
}
template <class T> VecT<Dual<T>> seed_axis(const VecT<T>& x, Eigen::Index k) {
  VecT<Dual<T>> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = Dual<T>(x(i), T(i == k ? 1.0 : 0.0));
  return out;
}

}  // namespace qplab
