#pragma once

#include <vector>

#include "qplab/dirac.hpp"
#include "qplab/qp.hpp"
#include "qplab/rng.hpp"
#include "qplab/section.hpp"

namespace qplab::steinberg {

struct Transversality {
  int slice_rank = 0;     // dim of T_h Sigma
  int class_rank = 0;     // dim of the tangent to the conjugacy class
  int combined_rank = 0;
  int dim = 0;            // dim G
  bool ok() const { return combined_rank == dim; }
};
Transversality transversality_check(const Vec& t, const liealg::OrthonormalBasis& b);

// g in SL(n) with g h g^{-1} = sigma(Xi(h)), h regular. Built from Krylov
// bases with a common cyclic vector.
Mat conj_to_sigma(const Mat& h);

// k centralizer elements exp(x), x in the centralizer of h with |x| <= radius.
// The first one is the identity.
std::vector<Mat> centralizer_fiber_sample(const Mat& h, int k, Rng& rng, const liealg::OrthonormalBasis& b,
                                          double radius = 0.5);

struct SlicePoint {
  Vec x;
  Mat T;  // orthonormal basis of T_x M_Sigma in frame coordinates
  Mat P;  // induced bivector in the T basis
  dirac::LinearDirac L;
  int rank = 0;
};
// Backward image of the quasi-Poisson Dirac structure to Phi^{-1}(targets).
// Throws dirac::ConventionError if the result is not the graph of a bivector.
SlicePoint slice_at(const qp::QPSpace& m, const Vec& x, const std::vector<Target>& targets);

// Chart (t, c) -> (exp(sum c_k x_k(t)), sigma(t)) of the universal centralizer
// inside D(G_ad), x_k(t) the traceless part of sigma(t)^k.
class ZChart {
 public:
  explicit ZChart(int n);
  int n() const { return n_; }
  int l() const { return n_ - 1; }
  const qp::QPSpace& space() const { return space_; }

  template <class S> VecT<S> point(const VecT<S>& y) const {
    const int l = n_ - 1;
    VecT<S> t = y.head(l);
    MatT<S> h = sigma_point<S>(n_, t);
    MatT<S> x = zeros<S>(n_, n_), hk = identity<S>(n_);
    for (int k = 0; k < l; ++k) {
      hk = hk * h;
      MatT<S> xk = hk - identity<S>(n_) * (trace<S>(hk) * S(1.0 / n_));
      x += xk * y(l + k);
    }
    VecT<S> out(space_.layout.dim());
    space_.layout.set_block<S>(out, 0, 0, expm<S>(x));
    space_.layout.set_block<S>(out, 1, 0, h);
    return out;
  }
  Vec point(const Vec& y) const { return point<cd>(y); }
  // Chart coordinates of (exp(x), sigma(t)) for x centralizing sigma(t).
  Vec coords_of(const Vec& t, const Mat& x) const;

  // Frame-coordinate images of the chart axes, 2 dim G x 2l.
  Mat frame_jacobian(const Vec& y) const;
  dirac::LinearDirac dirac_at(const Vec& y) const;
  Mat bivector(const Vec& y) const;
  // Restriction of the 2-form of the double.
  Mat form(const Vec& y) const;
  // d of the restricted 2-form, from the ambient 3-form.
  Array3 dform(const Vec& y) const;

 private:
  int n_;
  qp::QPSpace space_;
};

struct ZSample {
  Vec y;  // chart coordinates
  Mat a, h;
};
// t complex Gaussian, x in the centralizer of sigma(t) with |x| <= radius.
ZSample sample_z(const ZChart& chart, Rng& rng, double radius = 0.5);

struct ZReport {
  bool graph = false;
  int rank = 0;
  double jacobi = 0.0;          // schouten(pi_Sigma, pi_Sigma), central differences
  double inverse_defect = 0.0;  // |pi_Sigma omega_Sigma^T - I|
  double closed_defect = 0.0;   // |d omega_Sigma|
  double toda = 0.0;            // brackets of the Chevalley coordinates
  double membership = 0.0;      // |a h a^{-1} - h|
};
ZReport z_check(const ZChart& chart, const Vec& y, double step = 1e-4);

// max |pi_Sigma(dt_i, dt_j)| over the chart points.
double toda_commute_check(const ZChart& chart, const std::vector<Vec>& ys);

// Compare the universal centralizer bivector obtained from D(G) directly with
// the one obtained by slicing the one-sided slice G x Sigma again.
double two_route_defect(int n, const Mat& a, const Vec& t);

}  // namespace qplab::steinberg
