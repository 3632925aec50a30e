#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qplab/liealg.hpp"
#include "qplab/qp.hpp"
#include "qplab/rng.hpp"
#include "qplab/tensorcalc.hpp"

namespace qplab::wonderful {

using liealg::Subset;

// Point (g, h).z_I. I = {1..l} with h = 1 is the interior point g.
struct Certificate {
  Subset I;
  Mat g, h;
};

// Closure of PGL(n) in prod_k P(End wedge^k C^n), k = 1..n-1.
struct WonderfulPoint {
  std::vector<Mat> comps;  // Frobenius-normalized
  Certificate cert;
  bool interior() const { return static_cast<int>(cert.I.size()) == static_cast<int>(comps.size()); }
  int n() const { return static_cast<int>(cert.g.rows()); }
};

class MembershipError : public std::runtime_error {
 public:
  MembershipError(const std::string& what, double residual) : std::runtime_error(what), residual(residual) {}
  double residual;
};

std::vector<Mat> normalize(std::vector<Mat> comps);
// max_k min_c |A_k - c B_k| over normalized tuples.
double projective_distance(const std::vector<Mat>& a, const std::vector<Mat>& b);

WonderfulPoint embed(const Mat& g);
// Spectral projector onto the top weight space of sum_{i not in I} coweight_i
// in each wedge^k.
WonderfulPoint basepoint(const Subset& I, int n);
// (g, h).a = g a h^{-1}; the certificate is carried along.
WonderfulPoint act(const Mat& g, const Mat& h, const WonderfulPoint& a);
std::vector<Mat> evaluate(const Certificate& c);
double certificate_residual(const WonderfulPoint& a);
// rank of each component; point lies on D_i iff component i has rank one
std::vector<int> rank_signature(const WonderfulPoint& a, double rel = 1e-9);

// (g, h).z_I == z_I, by direct evaluation.
bool stabilizer_membership(const Subset& I, const Mat& g, const Mat& h, double tol = 1e-8);
// Closed form: g in P_I, h in P_I^-, Levi parts agree up to the center of L_I.
bool stabilizer_closed_form(const Subset& I, const Mat& g, const Mat& h, double tol = 1e-8);
// Random element of the stabilizer of z_I.
std::pair<Mat, Mat> sample_stabilizer(const Subset& I, int n, Rng& rng, double scale = 0.5);

// Kernel of the ordinary infinitesimal action on the projective tuple, in
// (g + g) basis coordinates; dimension dim G + l - |I|.
Mat action_kernel(const WonderfulPoint& a);
// Kernel of the logarithmic action; dimension dim G.
Mat log_cotangent_fiber(const WonderfulPoint& a);
// p_I x_{l_I} p_I^- in (g + g) coordinates.
Mat basepoint_fiber(const Subset& I, int n);
// |K^T diag(1,-1) K| for the split Killing pairing.
double split_lagrangian_defect(const Mat& k);

// Block-triangular bookkeeping for P_I.
Mat levi_projection(const Mat& x, const Subset& I, double tol = 1e-7);

struct LeafValue {
  Subset I;
  Vec values;  // one per simple root not in I
};
template <class S> VecT<S> leaf_values(const MatT<S>& p, const Subset& I) {
  std::vector<int> blocks = liealg::blocks_of(I, static_cast<int>(p.rows()));
  std::vector<int> start, size;
  for (int r = 0; r < static_cast<int>(blocks.size()); ++r) {
    if (r == 0 || blocks[r] != blocks[r - 1]) {
      start.push_back(r);
      size.push_back(0);
    }
    ++size.back();
  }
  const int nb = static_cast<int>(start.size());
  std::vector<S> dets;
  for (int j = 0; j < nb; ++j) dets.push_back(determinant<S>(MatT<S>(p.block(start[j], start[j], size[j], size[j]))));
  VecT<S> out(nb - 1);
  for (int j = 0; j + 1 < nb; ++j) out(j) = dets[j] / dets[j + 1];
  return out;
}

// wedge^k of tau(w) = diag(1, w_1, w_1 w_2, ...) divided by its top entry:
// the monomial prod_m w_m^{e_m} on each k-subset, finite at w = 0.
template <class S> MatT<S> torus_block(const VecT<S>& w, int n, int k) {
  auto subs = tensorcalc::k_subsets(n, k);
  const int l = n - 1;
  MatT<S> T = zeros<S>(static_cast<Eigen::Index>(subs.size()), static_cast<Eigen::Index>(subs.size()));
  for (size_t r = 0; r < subs.size(); ++r) {
    S mono(1.0);
    for (int m = 0; m < l; ++m) {
      int e = -std::max(0, k - 1 - m);
      for (int j : subs[r]) e += j > m ? 1 : 0;
      for (int q = 0; q < e; ++q) mono = mono * w(m);
    }
    T(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = mono;
  }
  return T;
}

// Point of D-bar: a in the compactification, (x, y) in the fiber over a.
struct LogDoublePoint {
  WonderfulPoint a;
  Mat x, y;
  double residual = 0.0;
};
// Throws MembershipError when the residual exceeds tol.
LogDoublePoint dbar_membership(const WonderfulPoint& a, const Mat& x, const Mat& y, double tol = 1e-7);
double dbar_residual(const WonderfulPoint& a, const Mat& x, const Mat& y);
std::pair<Mat, Mat> bar_moment(const LogDoublePoint& p);
// c_I(g^{-1} x g) for the certificate (I, g, h).
LeafValue leaf_functional(const LogDoublePoint& p, double tol = 1e-7);
// Spanning set of [p_I, p_I]: u_I and the traceless part of each Levi block.
std::vector<Mat> derived_parabolic(const Subset& I, int n);
// d/dt of c_I along g^{-1} x g -> g^{-1} x g exp(t u).
Vec leaf_derivative(const LogDoublePoint& p, const Mat& u);

LogDoublePoint sample_boundary(const Subset& I, int n, Rng& rng, double scale = 0.5);
LogDoublePoint sample_interior(int n, Rng& rng, double scale = 0.5);

// Ambient model of D-bar inside prod End(wedge^k) x G x G.
tensorcalc::Layout dbar_layout(int n);
tensorcalc::BivSpec bar_bivector_spec();
Vec ambient_point(const tensorcalc::Layout& lay, const LogDoublePoint& p);
Mat bar_bivector(const LogDoublePoint& p);

// Pushforward along (a, g) -> (a, a g a^{-1}, g) of the bivector of the
// double, compared with bar_bivector at an interior point.
double interior_tangency_defect(const Mat& a, const Mat& g);

struct BigbivReport {
  double lines[4] = {0, 0, 0, 0};
  double assembled = 0.0;
};
// The four pushforward formulas for the frame fields of G x G under
// (g, h) -> (g, h g, g h) and the assembled bivector.
BigbivReport bigbiv_check(const Mat& g, const Mat& h);

// Chart of D-bar near a point over the big cell of the compactification:
//   a = g V tau(w) U h^{-1}
//   x = g V (tau N tau^{-1}) S M V^{-1} g^{-1}
//   y = h U^{-1} N S (tau^{-1} M tau) U h^{-1}
// with V, N lower unipotent, U, M upper unipotent, S = S0 exp(diag).
// Coordinates (v, w, u, n, s, m); w_i = 0 cuts out D_i.
class DbarChart {
 public:
  DbarChart(const Mat& g, const Mat& h, const Mat& S0, const Vec& center);
  static DbarChart at(const LogDoublePoint& p);

  int n() const { return n_; }
  int dim() const { return 2 * N_; }
  int base_dim() const { return N_; }
  const Vec& center() const { return center_; }
  const tensorcalc::Layout& layout() const { return lay_; }
  // index of w_i in the coordinates
  int w_index(int i) const { return nu_ + i; }
  std::vector<int> boundary() const;  // indices i with w_i = 0 at the center

  template <class S> VecT<S> point(const VecT<S>& c) const;
  Vec point(const Vec& c) const { return point<cd>(c); }

  // Chart components of ambient tangent vectors (columns), exact on vectors
  // tangent to D-bar up to rescaling of the projective blocks.
  Mat to_chart(const Mat& ambient) const;
  double tangency_residual(const Mat& ambient) const;

  Mat bivector() const;         // chart components of the bivector at the center
  Mat rho() const;              // action fields, dim x 2 dim G
  Mat log_bivector() const;     // components in the log frame w_i d/dw_i
  Mat log_rho() const;
  // qp Dirac structure at the center in chart coordinates.
  qp::PointData point_data() const;

 private:
  template <class S> MatT<S> chart_fields(const VecT<S>& c, const tensorcalc::VecSpec& spec) const;
  Mat log_family(const tensorcalc::VecSpec& spec) const;

  int n_, l_, nu_, N_;
  Mat g_, h_, S0_;
  Vec center_;
  tensorcalc::Layout lay_;
  Mat K0_;
};

struct LogRankReport {
  int log_rank = 0;
  int fiber_parallel = 0;   // dim(im pi^# intersected with fiber directions)
  int transverse = 0;       // rank of the action fields projected to the base
  double tangency = 0.0;    // normal components of the bivector on the divisor
};
LogRankReport log_nondeg_rank(const LogDoublePoint& p);

}  // namespace qplab::wonderful
