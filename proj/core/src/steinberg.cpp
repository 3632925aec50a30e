#include "qplab/steinberg.hpp"

#include <stdexcept>

#include <Eigen/SVD>
#include <Eigen/LU>

namespace qplab::steinberg {

namespace {

template <class S> VecT<S> flat(const MatT<S>& m) {
  return Eigen::Map<const VecT<S>>(m.data(), m.size());
}

Mat unflat(const Vec& v, int n) { return Eigen::Map<const Mat>(v.data(), n, n); }

Mat krylov(const Mat& h, const Vec& v) {
  const Eigen::Index n = h.rows();
  Mat K(n, n);
  Vec w = v;
  for (Eigen::Index k = 0; k < n; ++k) {
    K.col(k) = w;
    w = h * w;
  }
  return K;
}

}  // namespace

Transversality transversality_check(const Vec& t, const liealg::OrthonormalBasis& b) {
  const int n = b.n, N = b.dim(), l = n - 1;
  Mat h = sigma_point<cd>(n, t);
  Mat hi = inverse<cd>(h);
  Mat dS = jacobian([&](const VecT<D1>& u) { return flat<D1>(sigma_point<D1>(n, u)); }, t);
  Mat slice(N, l), cls(N, N);
  for (int k = 0; k < l; ++k) slice.col(k) = b.coords<cd>(Mat(hi * unflat(dS.col(k), n)));
  for (int i = 0; i < N; ++i) cls.col(i) = b.coords<cd>(Mat(hi * b.e[i] * h - b.e[i]));
  Transversality r;
  r.dim = N;
  r.slice_rank = rank(slice);
  r.class_rank = rank(cls);
  Mat both(N, l + N);
  both << slice, cls;
  r.combined_rank = rank(both);
  return r;
}

Mat conj_to_sigma(const Mat& h) {
  const int n = static_cast<int>(h.rows());
  Mat s = sigma_point<cd>(n, group::chevalley<cd>(h));
  Vec e1 = Vec::Zero(n);
  e1(0) = 1.0;
  Mat Ks = krylov(s, e1);
  // pick the best conditioned cyclic vector among a few fixed candidates
  std::vector<Vec> cand;
  for (int i = 0; i < n; ++i) cand.push_back(Vec::Unit(n, i));
  cand.push_back(Vec::Ones(n));
  Vec alt(n);
  for (int i = 0; i < n; ++i) alt(i) = cd(1.0 + i, 0.5 * i);
  cand.push_back(alt);
  double best = 0.0;
  Mat Kh;
  for (const Vec& v : cand) {
    Mat K = krylov(h, v);
    Eigen::JacobiSVD<Mat> svd(K);
    double c = svd.singularValues()(n - 1) / svd.singularValues()(0);
    if (c > best) {
      best = c;
      Kh = K;
    }
  }
  if (best < 1e-12) throw std::domain_error("conj_to_sigma: element is not regular");
  return group::det_normalize(Mat(Ks * inverse<cd>(Kh)));
}

std::vector<Mat> centralizer_fiber_sample(const Mat& h, int k, Rng& rng, const liealg::OrthonormalBasis& b,
                                          double radius) {
  const int n = b.n;
  Mat Z = group::centralizer_algebra(h, b);
  std::vector<Mat> out;
  if (k <= 0) return out;
  out.push_back(Mat::Identity(n, n));
  for (int i = 1; i < k; ++i) {
    Vec c = rng.complex_vector(static_cast<int>(Z.cols()));
    Vec x = Z * c;
    double nx = x.norm();
    if (nx > 0.0) x *= radius * rng.uniform() / nx;
    out.push_back(group::group_exp(Mat::Identity(n, n), b.element<cd>(x)));
  }
  return out;
}

SlicePoint slice_at(const qp::QPSpace& m, const Vec& x, const std::vector<Target>& targets) {
  if (static_cast<int>(targets.size()) != m.groups())
    throw std::invalid_argument("slice_at: one target per acting group");
  qp::PointData pd = qp::point_data(m, x);
  for (size_t f = 0; f < targets.size(); ++f)
    if (target_residual(pd.Phi[f], targets[f]) > 1e-7)
      throw std::domain_error("slice_at: moment component is off the cross-section");
  SlicePoint s;
  s.x = x;
  s.T = qp::slice_tangent(pd, targets, m.layout.basis());
  s.L = dirac::backward_image(qp::qp_dirac(pd), s.T);
  if (!s.L.is_graph()) throw dirac::ConventionError("slice_at: pulled-back structure is not a bivector graph");
  s.P = s.L.to_bivector();
  s.rank = s.P.size() ? rank(s.P) : 0;
  return s;
}

ZChart::ZChart(int n) : n_(n), space_(qp::make_double(n, true)) {}

Vec ZChart::coords_of(const Vec& t, const Mat& x) const {
  const int l = n_ - 1;
  Mat h = sigma_point<cd>(n_, t);
  Mat A(n_ * n_, l), hk = Mat::Identity(n_, n_);
  for (int k = 0; k < l; ++k) {
    hk = hk * h;
    Mat xk = hk - Mat::Identity(n_, n_) * (hk.trace() / static_cast<double>(n_));
    A.col(k) = flat<cd>(xk);
  }
  Vec c = A.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(flat<cd>(x));
  if ((A * c - flat<cd>(x)).norm() > 1e-8 * (1.0 + x.norm()))
    throw std::domain_error("coords_of: x does not centralize sigma(t)");
  Vec y(2 * l);
  y << t, c;
  return y;
}

Mat ZChart::frame_jacobian(const Vec& y) const {
  Mat J = jacobian([&](const VecT<D1>& z) { return point<D1>(z); }, y);
  return qp::frame_inverse(space_.layout, point(y)) * J;
}

dirac::LinearDirac ZChart::dirac_at(const Vec& y) const {
  qp::PointData pd = qp::point_data(space_, point(y));
  return dirac::backward_image(qp::qp_dirac(pd), frame_jacobian(y));
}

Mat ZChart::bivector(const Vec& y) const { return dirac_at(y).to_bivector(); }

Mat ZChart::form(const Vec& y) const {
  Vec x = point(y);
  Mat J = jacobian([&](const VecT<D1>& z) { return point<D1>(z); }, y);
  return J.transpose() * space_.omega(x) * J;
}

Array3 ZChart::dform(const Vec& y) const {
  Vec x = point(y);
  Mat J = jacobian([&](const VecT<D1>& z) { return point<D1>(z); }, y);
  Array3 dw = tensorcalc::ext_d2([&](const VecT<D1>& z) { return space_.omega(z); }, x);
  return contract(dw, J);
}

ZSample sample_z(const ZChart& chart, Rng& rng, double radius) {
  const int n = chart.n(), l = chart.l();
  const auto& b = chart.space().layout.basis();
  ZSample s;
  Vec t = rng.complex_vector(l);
  s.h = sigma_point<cd>(n, t);
  Mat Z = group::centralizer_algebra(s.h, b);
  Vec xc = Z * rng.complex_vector(static_cast<int>(Z.cols()));
  double nx = xc.norm();
  if (nx > 0.0) xc *= radius * rng.uniform() / nx;
  Mat x = b.element<cd>(xc);
  s.y = chart.coords_of(t, x);
  s.a = expm<cd>(x);
  return s;
}

ZReport z_check(const ZChart& chart, const Vec& y, double step) {
  const int l = chart.l();
  ZReport r;
  dirac::LinearDirac L = chart.dirac_at(y);
  r.graph = L.is_graph();
  if (!r.graph) return r;
  Mat P = L.to_bivector();
  r.rank = rank(P);
  Array3 sch = tensorcalc::schouten_fd([&](const Vec& z) { return chart.bivector(z); }, y, step);
  r.jacobi = sch.max_abs();
  Mat W = chart.form(y);
  r.inverse_defect = max_abs(Mat(P * W.transpose() - Mat::Identity(2 * l, 2 * l)));
  r.closed_defect = chart.dform(y).max_abs();
  r.toda = max_abs(Mat(P.topLeftCorner(l, l)));
  auto mats = chart.space().layout.unpack(chart.point(y));
  r.membership = max_abs(Mat(mats[0] * mats[1] * inverse<cd>(mats[0]) - mats[1]));
  return r;
}

double toda_commute_check(const ZChart& chart, const std::vector<Vec>& ys) {
  const int l = chart.l();
  double worst = 0.0;
  for (const Vec& y : ys) worst = std::max(worst, max_abs(Mat(chart.bivector(y).topLeftCorner(l, l))));
  return worst;
}

double two_route_defect(int n, const Mat& a, const Vec& t) {
  qp::OneSidedSlice s = qp::make_one_sided_slice(n, a, t, Target::Sigma);
  qp::QPSpace D = qp::make_double(n);
  const auto& b = D.layout.basis();
  // slice the moment a b a^{-1} of G x Sigma onto Sigma
  Mat T = qp::slice_tangent(s.pd, {Target::Sigma}, b);
  dirac::LinearDirac Ls = dirac::from_span([&] {
    const int d = static_cast<int>(s.Q.rows());
    Mat span(2 * d, d);
    span << s.Q, Mat::Identity(d, d);
    return span;
  }());
  Mat once = dirac::backward_image(Ls, T).to_bivector();
  qp::PointData full = qp::point_data(D, D.layout.pack({a, s.b}));
  Mat twice = dirac::backward_image(qp::qp_dirac(full), Mat(s.j * T)).to_bivector();
  return max_abs(Mat(once - twice));
}

}  // namespace qplab::steinberg
