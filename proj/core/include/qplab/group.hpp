#pragma once

#include <vector>

#include "qplab/liealg.hpp"
#include "qplab/linalg.hpp"

namespace qplab::group {

enum class Side { L, R };

// base * exp(x), determinant renormalised to one.
Mat group_exp(const Mat& base, const Mat& x);

template <class S> MatT<S> Ad(const MatT<S>& g, const MatT<S>& x) { return g * x * inverse<S>(g); }

// theta^L_h(v) = h^{-1} v, theta^R_h(v) = v h^{-1}.
Mat maurer_cartan(Side side, const Mat& h, const Mat& v);
template <class S> MatT<S> theta_t(Side side, const MatT<S>& h, const MatT<S>& v) {
  MatT<S> hi = inverse<S>(h);
  return side == Side::L ? MatT<S>(hi * v) : MatT<S>(v * hi);
}

// eta(u,v,w) = 1/2 (theta u, [theta v, theta w]).
cd eta(const Mat& h, const Mat& u, const Mat& v, const Mat& w, Side side = Side::L);

// Elementary symmetric functions e_0..e_n of the eigenvalues
// (Faddeev-LeVerrier, exact for dual scalars).
template <class S> std::vector<S> elementary_symmetric(const MatT<S>& h) {
  const Eigen::Index n = h.rows();
  std::vector<S> a(n + 1, S(0.0));
  a[0] = S(1.0);
  MatT<S> m = zeros<S>(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = h * m;
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) += a[k - 1];
    a[k] = trace<S>(MatT<S>(h * m)) * S(-1.0 / static_cast<double>(k));
  }
  std::vector<S> e(n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) e[k] = (k % 2 == 0) ? a[k] : S(-a[k]);
  return e;
}

// Chevalley coordinates Xi(h) = (e_1, ..., e_{n-1}).
template <class S> VecT<S> chevalley(const MatT<S>& h) {
  std::vector<S> e = elementary_symmetric<S>(h);
  VecT<S> t(h.rows() - 1);
  for (Eigen::Index k = 1; k < h.rows(); ++k) t(k - 1) = e[k];
  return t;
}

// Kernel of x -> h x h^{-1} - x on g, as coordinate columns in the basis.
Mat centralizer_algebra(const Mat& h, const liealg::OrthonormalBasis& b, double rel = kRankTol);
bool is_regular(const Mat& h, const liealg::OrthonormalBasis& b, double rel = kRankTol);

// Matrix of Ad_g in basis coordinates.
Mat ad_matrix(const Mat& g, const liealg::OrthonormalBasis& b);

Mat det_normalize(const Mat& g);
// Equality in PGL(n): a = c b for a scalar c.
double projective_distance(const Mat& a, const Mat& b);

}  // namespace qplab::group
