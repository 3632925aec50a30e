#pragma once

#include <functional>
#include <optional>
#include <string>
#include <type_traits>

#include "qplab/dirac.hpp"
#include "qplab/section.hpp"
#include "qplab/tensorcalc.hpp"

namespace qplab::qp {

using tensorcalc::BivSpec;
using tensorcalc::Layout;

// A field evaluable on plain, first- and second-order dual points.
template <template <class> class Out> struct Field {
  std::function<Out<cd>(const VecT<cd>&)> f0;
  std::function<Out<D1>(const VecT<D1>&)> f1;
  std::function<Out<D2>(const VecT<D2>&)> f2;

  template <class S> Out<S> operator()(const VecT<S>& x) const {
    if constexpr (std::is_same_v<S, cd>) return f0(x);
    else if constexpr (std::is_same_v<S, D1>) return f1(x);
    else return f2(x);
  }
  explicit operator bool() const { return static_cast<bool>(f0); }
};
template <template <class> class Out, class F> Field<Out> make_field(const F& f) { return {f, f, f}; }

using VecField = Field<VecT>;
using MatField = Field<MatT>;

// Quasi-Poisson space on a product of matrix-group factors. The action is
// encoded in the layout (which group acts on which side of which factor);
// the moment map stacks one n x n matrix per acting group.
struct QPSpace {
  std::string name;
  Layout layout;
  BivSpec pi;
  VecField moment;
  MatField omega;  // ambient 2-form, optional
  bool adjoint = false;

  int n() const { return layout.n(); }
  int groups() const { return layout.groups(); }
  int dim() const { return layout.factor_count() * layout.basis().dim(); }
};

QPSpace make_pi_G(int n);
// D(G) in the (a, b) coordinates with (g,h).(a,b) = (g a h^{-1}, h b h^{-1}).
QPSpace make_double(int n, bool adjoint = false);
// Disjoint product; group indices of b are shifted past those of a.
QPSpace product(const QPSpace& a, const QPSpace& b);
// Sign of psi = 1/2 sum e_i(1)_M ^ e_i(2)_M in the fused bivector. With the
// action sign and 2-form above, the moment Phi_1 Phi_2 is compatible with -psi.
inline constexpr double kFusionSign = -1.0;
// Fuse group g2 into g1: adds the psi term; moment Phi_g1 Phi_g2.
QPSpace fuse(const QPSpace& m, int g1 = 0, int g2 = 1);

// Linear data at a point, in left-trivialized frame coordinates
// (one copy of g per factor). Covectors are paired with the same frame.
struct PointData {
  Vec x;
  Mat F, Finv;     // ambient frame and its left inverse
  Mat P;           // pi, d x d
  Mat R;           // fundamental fields, d x (groups * dim g)
  std::vector<Mat> Phi;
  Mat dPhiF;       // ambient target vectors of the frame, (groups * n^2) x d
  Mat dPhi;        // left-trivialized target coordinates, (groups * dim g) x d
  Mat Theta;       // (theta^L - theta^R)(dPhi .), (groups * dim g) x d
  Mat Sigma;       // 1/2 Phi^*(theta^L + theta^R, xi), d x (groups * dim g)
  Mat C;           // I + kappa R Theta
  std::optional<Mat> W;  // omega in frame coordinates
  int d() const { return static_cast<int>(P.rows()); }
};

// Factor in C = I + kappa * sum (theta^L - theta^R)_i(dPhi .) (e_i)_M.
inline constexpr double kCeeFactor = 0.25;

PointData point_data(const QPSpace& m, const Vec& x);
// Moment-map-dependent pieces for arbitrary frame data.
void attach_moment(PointData& pd, const std::vector<Mat>& phi, const Mat& dPhiF, const liealg::OrthonormalBasis& b);

dirac::LinearDirac qp_dirac(const PointData& pd);

Mat frame_of(const Layout& lay, const Vec& x);
Mat frame_inverse(const Layout& lay, const Vec& x);
std::vector<Mat> moment_mats(const QPSpace& m, const Vec& x);

// Pullback of the bi-invariant 3-form along Phi, contracted with frame columns.
Array3 eta_pullback(const PointData& pd, const liealg::OrthonormalBasis& b);

double verify_qp_identity(const QPSpace& m, const Vec& x);
double verify_Q1(const QPSpace& m, const Vec& x);
double verify_Q2(const QPSpace& m, const Vec& x);
struct Q3Result {
  int kernel_dim = 0;
  int predicted_dim = 0;
  double distance = 0.0;
  bool ok() const { return kernel_dim == predicted_dim && distance <= 1e-6; }
};
Q3Result verify_Q3(const QPSpace& m, const Vec& x);
int nondeg_rank(const QPSpace& m, const Vec& x);
double check_compat(const QPSpace& m, const Vec& x);

// Distance between Phi_* L_M and the quasi-Poisson Dirac structure of the
// target product of (G, pi_G) at Phi(x).
double forward_dirac_defect(const QPSpace& m, const Vec& x);

// Twisted Courant closure probe on ambient sections built from constant
// (alpha, xi); returns the worst residual over the sampled pairs.
double courant_probe(const QPSpace& m, const Vec& x, int pairs, unsigned seed, double twist = dirac::kTwistSign);

// Invariance of pi under the action: Lie derivative along each fundamental field.
double invariance_defect(const QPSpace& m, const Vec& x);

// One-sided slice G x Sigma' of D(G): a arbitrary, b on the target, residual
// action g.(a,b) = (g a, b), moment a b a^{-1}.
struct OneSidedSlice {
  int n = 0;
  steinberg::Target target = steinberg::Target::Sigma;
  Mat a, b;
  Vec t;
  Mat j;      // frame of T(G x Sigma') inside the D(G) frame, (2N) x (N + l)
  Mat P;      // recovered bivector, (N + l) x (N + l)
  Mat R;      // residual fundamental fields
  Mat Q;      // L' = {(Q beta, beta)}
  PointData pd;
  double rho_defect = 0.0;   // |R - Q S'|
  double skew_defect = 0.0;  // |P + P^T|
};
OneSidedSlice make_one_sided_slice(int n, const Mat& a, const Vec& t, steinberg::Target target);

// Orthonormal frame-coordinate basis of T_x Phi^{-1}(targets): dPhi lands in
// the tangent space of each target copy of the cross-section.
Mat slice_tangent(const PointData& pd, const std::vector<steinberg::Target>& targets,
                  const liealg::OrthonormalBasis& b);

struct ReductionResult {
  double j_defect = 0.0;
  double bivector_defect = 0.0;
  Mat pi_direct, pi_reduced;
};
// M a space whose moment components lie on the given targets at x.
ReductionResult reduction_check(const QPSpace& m, const Vec& x, const std::vector<steinberg::Target>& targets);

}  // namespace qplab::qp
