#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qplab/dirac.hpp"
#include "qplab/section.hpp"
#include "qplab/wonderful.hpp"

namespace qplab::zbar {

using liealg::Subset;
using wonderful::LeafValue;
using wonderful::WonderfulPoint;

// (a, h) with a in the closure of Z_ad(h), h in Sigma.
struct ZbarPoint {
  WonderfulPoint a;
  Mat h;
  Subset I;
  LeafValue leaf;
  double residual = 0.0;
};

// Accepts iff (a, h, h) lies on D-bar; throws wonderful::MembershipError otherwise.
ZbarPoint zbar_membership(const WonderfulPoint& a, const Mat& h, double tol = 1e-7);
// Xi(g) == Xi(h^{-1})
bool delta_membership(const Mat& g, const Mat& h, double tol = 1e-7);
double delta_residual(const Mat& g, const Mat& h);
inline Subset stratum(const ZbarPoint& p) { return p.I; }
LeafValue leaf_map(const ZbarPoint& p, double tol = 1e-7);

namespace detail {
inline cd value_of(const cd& x) { return x; }
template <class T> cd value_of(const Dual<T>& x) { return value_of(x.v); }
}  // namespace detail

// Eigenvalues of sigma(t) and the matrix of eigenvectors (lambda^{n-1}, ..., 1).
// Roots are polished by Newton steps in S so that derivatives come out exact.
template <class S> std::pair<VecT<S>, MatT<S>> diagonalize(int n, const VecT<S>& t) {
  MatT<S> s = steinberg::sigma_point<S>(n, t);
  Mat s0(n, n);
  for (Eigen::Index i = 0; i < s.size(); ++i) s0(i) = detail::value_of(s(i));
  Eigen::ComplexEigenSolver<Mat> es(s0, false);
  std::vector<cd> l0(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(l0.begin(), l0.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  for (int i = 0; i + 1 < n; ++i)
    if (std::abs(l0[i] - l0[i + 1]) < 1e-8) throw std::domain_error("diagonalize: repeated eigenvalue");
  VecT<S> lam(n);
  for (int j = 0; j < n; ++j) {
    S x(l0[j]);
    for (int it = 0; it < 4; ++it) {
      // p(x) = x^n - sum_k s(0, k-1) x^{n-k}
      S p(1.0), dp(0.0);
      for (int k = 1; k <= n; ++k) {
        dp = dp * x + p;
        p = p * x - s(0, k - 1);
      }
      x = x - p / dp;
    }
    lam(j) = x;
  }
  MatT<S> g(n, n);
  for (int j = 0; j < n; ++j) {
    S pw(1.0);
    for (int i = n - 1; i >= 0; --i) {
      g(i, j) = pw;
      pw = pw * lam(j);
    }
  }
  return {lam, g};
}

// Chart (t, w) -> (g_t tau(w) g_t^{-1}, sigma(t), sigma(t)) of Zbar over the
// regular semisimple locus, g_t the eigenvector matrix of sigma(t) and
// tau(w) = diag(1, w_1, w_1 w_2, ...). w_i = 0 cuts out the i-th divisor.
class ZbarChart {
 public:
  explicit ZbarChart(int n);
  int n() const { return n_; }
  int l() const { return n_ - 1; }
  int dim() const { return 2 * (n_ - 1); }
  const tensorcalc::Layout& layout() const { return lay_; }

  template <class S> VecT<S> point(const VecT<S>& y) const {
    const int l = n_ - 1;
    VecT<S> t = y.head(l);
    auto [lam, g] = diagonalize<S>(n_, t);
    VecT<S> w = y.tail(l);
    MatT<S> gi = inverse<S>(g);
    MatT<S> s = steinberg::sigma_point<S>(n_, t);
    VecT<S> out(lay_.dim());
    for (int k = 1; k < n_; ++k)
      lay_.set_block<S>(out, 0, k - 1,
                        MatT<S>(tensorcalc::wedge_power<S>(g, k) * wonderful::torus_block<S>(w, n_, k) *
                                tensorcalc::wedge_power<S>(gi, k)));
    lay_.set_block<S>(out, 1, 0, s);
    lay_.set_block<S>(out, 2, 0, s);
    return out;
  }

  // Certified point of D-bar and of Zbar at chart coordinates y.
  wonderful::LogDoublePoint dbar_point(const Vec& y) const;
  ZbarPoint zbar_point(const Vec& y) const;
  wonderful::DbarChart dbar_chart(const Vec& y) const;
  // D-bar chart components of the chart axes, 2 dim G x 2l.
  Mat frame_jacobian(const Vec& y) const;
  dirac::LinearDirac dirac_at(const Vec& y) const;
  Mat bivector(const Vec& y) const;
  // Leaf map with the w_i outside I held at zero.
  Vec leaf(const Vec& y, const Subset& I) const;

 private:
  int n_;
  tensorcalc::Layout lay_;
};

struct LogSymplecticReport {
  bool graph = false;
  Subset I;
  int rank = 0;            // ordinary rank of the bivector at the point
  int log_rank = 0;        // rank in the frame w_i d/dw_i
  double tangency = 0.0;   // |pi(dw_i, .)| for the vanishing w_i
  double jacobi = 0.0;     // schouten(pi, pi), central differences
  double leaf_variation = 0.0;  // derivative of the leaf map along im pi^#
  double membership = 0.0;
};
LogSymplecticReport log_symplectic_check(const ZbarChart& chart, const Vec& y, double step = 1e-4,
                                         double rank_tol = kRankTol);

struct SncReport {
  bool divisors_match = true;  // w_i = 0 iff the i-th component has rank one
  int min_immersion_rank = 0;  // over the sampled corners, expected 2l
  int crossing_rank = 0;       // rank of (dw_i) at the deepest corner, expected l
};
// Chart corners w in {0, 1}^l above sigma(t).
SncReport snc_check(const ZbarChart& chart, const Vec& t);

}  // namespace qplab::zbar
