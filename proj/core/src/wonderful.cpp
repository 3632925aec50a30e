#include "qplab/wonderful.hpp"

#include <Eigen/LU>

#include "qplab/group.hpp"

namespace qplab::wonderful {

using group::Side;
using tensorcalc::Factor;
using tensorcalc::frame;
using tensorcalc::Layout;
using tensorcalc::Term;
using tensorcalc::VecSpec;

namespace {

cd inner(const Mat& a, const Mat& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

Mat random_group(int n, Rng& rng, const liealg::OrthonormalBasis& b, double scale) {
  return group::group_exp(Mat::Identity(n, n), b.element<cd>(rng.complex_vector(b.dim(), scale)));
}

Mat span_exp(const std::vector<Mat>& gens, Rng& rng, double scale, int n) {
  Mat x = Mat::Zero(n, n);
  for (const Mat& e : gens) x += e * rng.complex_normal() * scale;
  return expm<cd>(x);
}

// Doolittle factorization a = L D U without pivoting.
struct Ldu {
  Mat L, D, U;
};
Ldu ldu(const Mat& a) {
  const Eigen::Index n = a.rows();
  Mat L = Mat::Identity(n, n), U = a;
  for (Eigen::Index c = 0; c < n; ++c) {
    if (std::abs(U(c, c)) < 1e-12) throw std::domain_error("ldu: vanishing leading minor");
    for (Eigen::Index r = c + 1; r < n; ++r) {
      cd f = U(r, c) / U(c, c);
      L(r, c) = f;
      U.row(r) -= f * U.row(c);
    }
  }
  Mat D = U.diagonal().asDiagonal();
  Mat Un = D.inverse() * U;
  return {L, D, Un};
}

std::vector<std::pair<int, int>> strict_pairs(int n, bool lower) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (lower ? i > j : i < j) out.emplace_back(i, j);
  return out;
}

template <class S> VecT<S> flat_t(const MatT<S>& m) {
  VecT<S> v(m.size());
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) v(c * m.rows() + r) = m(r, c);
  return v;
}

// Family whose i-th column is the side-frame field of elems[i] on one factor.
Mat family_of(const Layout& lay, const Vec& x, int factor, Side side, const std::vector<Mat>& elems) {
  const int m = lay.block_size(factor, 0), o = lay.offset(factor, 0);
  Mat a = lay.block<cd>(x, factor, 0);
  Mat out = Mat::Zero(lay.dim(), static_cast<Eigen::Index>(elems.size()));
  for (size_t i = 0; i < elems.size(); ++i) {
    Mat v = side == Side::L ? Mat(a * elems[i]) : Mat(elems[i] * a);
    for (int c = 0; c < m; ++c)
      for (int r = 0; r < m; ++r) out(o + c * m + r, static_cast<Eigen::Index>(i)) = v(r, c);
  }
  return out;
}

}  // namespace

std::vector<Mat> normalize(std::vector<Mat> comps) {
  for (Mat& c : comps) {
    double nrm = c.norm();
    if (nrm == 0.0) throw std::domain_error("normalize: zero component");
    c /= nrm;
  }
  return comps;
}

double projective_distance(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("projective_distance: component count");
  std::vector<Mat> an = normalize(a), bn = normalize(b);
  double worst = 0.0;
  for (size_t k = 0; k < an.size(); ++k) {
    cd c = inner(bn[k], an[k]);
    worst = std::max(worst, (an[k] - c * bn[k]).norm());
  }
  return worst;
}

WonderfulPoint embed(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  WonderfulPoint p;
  for (int k = 1; k < n; ++k) p.comps.push_back(tensorcalc::wedge_power<cd>(g, k));
  p.comps = normalize(p.comps);
  p.cert = {liealg::full_subset(n), g, Mat::Identity(n, n)};
  return p;
}

WonderfulPoint basepoint(const Subset& I, int n) {
  Subset out = liealg::complement(I, n);
  WonderfulPoint p;
  for (int k = 1; k < n; ++k) {
    auto subs = tensorcalc::k_subsets(n, k);
    std::vector<int> wt;
    int best = -1;
    for (const auto& s : subs) {
      int w = 0;
      for (int i : out)
        for (int j : s) w += (j + 1 <= i) ? 1 : 0;
      wt.push_back(w);
      best = std::max(best, w);
    }
    Mat c = Mat::Zero(static_cast<Eigen::Index>(subs.size()), static_cast<Eigen::Index>(subs.size()));
    for (size_t r = 0; r < subs.size(); ++r)
      if (wt[r] == best) c(r, r) = 1.0;
    p.comps.push_back(c);
  }
  p.comps = normalize(p.comps);
  p.cert = {I, Mat::Identity(n, n), Mat::Identity(n, n)};
  return p;
}

std::vector<Mat> evaluate(const Certificate& c) {
  const int n = static_cast<int>(c.g.rows());
  WonderfulPoint z = basepoint(c.I, n);
  Mat hi = inverse<cd>(c.h);
  std::vector<Mat> out;
  for (int k = 1; k < n; ++k)
    out.push_back(tensorcalc::wedge_power<cd>(c.g, k) * z.comps[k - 1] * tensorcalc::wedge_power<cd>(hi, k));
  return normalize(out);
}

WonderfulPoint act(const Mat& g, const Mat& h, const WonderfulPoint& a) {
  const int n = a.n();
  Mat hi = inverse<cd>(h);
  WonderfulPoint out;
  for (int k = 1; k < n; ++k)
    out.comps.push_back(tensorcalc::wedge_power<cd>(g, k) * a.comps[k - 1] * tensorcalc::wedge_power<cd>(hi, k));
  out.comps = normalize(out.comps);
  out.cert = {a.cert.I, Mat(g * a.cert.g), Mat(h * a.cert.h)};
  return out;
}

double certificate_residual(const WonderfulPoint& a) { return projective_distance(a.comps, evaluate(a.cert)); }

std::vector<int> rank_signature(const WonderfulPoint& a, double rel) {
  std::vector<int> out;
  for (const Mat& c : a.comps) out.push_back(rank(c, rel));
  return out;
}

bool stabilizer_membership(const Subset& I, const Mat& g, const Mat& h, double tol) {
  const int n = static_cast<int>(g.rows());
  return projective_distance(evaluate({I, g, h}), basepoint(I, n).comps) <= tol;
}

bool stabilizer_closed_form(const Subset& I, const Mat& g, const Mat& h, double tol) {
  const int n = static_cast<int>(g.rows());
  liealg::ParabolicData P = liealg::parabolic(I, n);
  if (P.lower_residual(g) > tol || P.upper_residual(h) > tol) return false;
  Mat st = P.levi_part(g) * inverse<cd>(P.levi_part(h));
  // st^{-1} must be scalar on each Levi block
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (P.block_of[i] != P.block_of[j]) continue;
      if (i == j) {
        int first = 0;
        while (P.block_of[first] != P.block_of[i]) ++first;
        r = std::max(r, std::abs(st(i, i) - st(first, first)));
      } else {
        r = std::max(r, std::abs(st(i, j)));
      }
    }
  return r <= tol;
}

std::pair<Mat, Mat> sample_stabilizer(const Subset& I, int n, Rng& rng, double scale) {
  liealg::ParabolicData P = liealg::parabolic(I, n);
  Mat s = span_exp(P.levi, rng, scale, n);
  Mat z = span_exp(P.levi_center, rng, scale, n);
  Mat u = span_exp(P.u, rng, scale, n);
  Mat v = span_exp(P.um, rng, scale, n);
  return {Mat(u * s * z), Mat(v * s)};
}

Mat action_kernel(const WonderfulPoint& a) {
  const int n = a.n(), l = n - 1;
  liealg::OrthonormalBasis b = liealg::orthonormal_basis(n);
  const int N = b.dim();
  std::vector<Mat> comps = a.comps;
  int rows = 0;
  for (const Mat& c : comps) rows += static_cast<int>(c.size());
  Mat sys = Mat::Zero(rows, 2 * N + l);
  int o = 0;
  for (int k = 1; k <= l; ++k) {
    const Mat& A = comps[k - 1];
    const Eigen::Index m = A.rows();
    for (int i = 0; i < N; ++i) {
      Mat le = k == 1 ? b.e[i] : tensorcalc::wedge_derived(b.e[i], k);
      Mat left = le * A, right = -A * le;
      for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index r = 0; r < m; ++r) {
          sys(o + c * m + r, i) = left(r, c);
          sys(o + c * m + r, N + i) = right(r, c);
        }
    }
    for (Eigen::Index c = 0; c < m; ++c)
      for (Eigen::Index r = 0; r < m; ++r) sys(o + c * m + r, 2 * N + k - 1) = -A(r, c);
    o += static_cast<int>(A.size());
  }
  Mat ker = nullspace(sys);
  return column_space(Mat(ker.topRows(2 * N)));
}

Mat log_cotangent_fiber(const WonderfulPoint& a) {
  const int n = a.n();
  LogDoublePoint p{a, Mat::Identity(n, n), Mat::Identity(n, n), 0.0};
  DbarChart chart = DbarChart::at(p);
  Mat R = chart.log_rho();
  return nullspace(Mat(R.topRows(chart.base_dim())));
}

Mat basepoint_fiber(const Subset& I, int n) {
  liealg::ParabolicData P = liealg::parabolic(I, n);
  liealg::OrthonormalBasis b = liealg::orthonormal_basis(n);
  const int N = b.dim();
  std::vector<Vec> cols;
  auto pair = [&](const Mat& x, const Mat& y) {
    Vec v(2 * N);
    v << b.coords<cd>(x), b.coords<cd>(y);
    cols.push_back(v);
  };
  Mat zero = Mat::Zero(n, n);
  for (const Mat& e : P.u) pair(e, zero);
  for (const Mat& e : P.um) pair(zero, e);
  for (const Mat& e : P.levi) pair(e, e);
  Mat out(2 * N, static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = cols[i];
  return column_space(out);
}

double split_lagrangian_defect(const Mat& k) {
  const Eigen::Index N = k.rows() / 2;
  Mat J = Mat::Identity(2 * N, 2 * N);
  J.bottomRightCorner(N, N) *= -1.0;
  return max_abs(Mat(k.transpose() * J * k));
}

Mat levi_projection(const Mat& x, const Subset& I, double tol) {
  const int n = static_cast<int>(x.rows());
  liealg::ParabolicData P = liealg::parabolic(I, n);
  double r = P.lower_residual(x);
  if (r > tol) throw MembershipError("levi_projection: not in the parabolic", r);
  return P.levi_part(x);
}

double dbar_residual(const WonderfulPoint& a, const Mat& x, const Mat& y) {
  const int n = a.n();
  liealg::ParabolicData P = liealg::parabolic(a.cert.I, n);
  Mat p = inverse<cd>(a.cert.g) * x * a.cert.g;
  Mat q = inverse<cd>(a.cert.h) * y * a.cert.h;
  double r = certificate_residual(a);
  r = std::max(r, P.lower_residual(p));
  r = std::max(r, P.upper_residual(q));
  r = std::max(r, max_abs(Mat(P.levi_part(p) - P.levi_part(q))));
  return r;
}

LogDoublePoint dbar_membership(const WonderfulPoint& a, const Mat& x, const Mat& y, double tol) {
  double r = dbar_residual(a, x, y);
  if (r > tol) throw MembershipError("dbar_membership: point is off the log double", r);
  return {a, x, y, r};
}

std::pair<Mat, Mat> bar_moment(const LogDoublePoint& p) { return {p.x, inverse<cd>(p.y)}; }

LeafValue leaf_functional(const LogDoublePoint& p, double tol) {
  const Certificate& c = p.a.cert;
  Mat lp = levi_projection(Mat(inverse<cd>(c.g) * p.x * c.g), c.I, tol);
  return {c.I, leaf_values<cd>(lp, c.I)};
}

std::vector<Mat> derived_parabolic(const Subset& I, int n) {
  liealg::ParabolicData P = liealg::parabolic(I, n);
  std::vector<Mat> out = P.u;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || P.block_of[i] != P.block_of[j]) continue;
      Mat e = Mat::Zero(n, n);
      e(i, j) = 1.0;
      out.push_back(e);
    }
  for (int k : I) {
    Mat e = Mat::Zero(n, n);
    e(k - 1, k - 1) = 1.0;
    e(k, k) = -1.0;
    out.push_back(e);
  }
  return out;
}

Vec leaf_derivative(const LogDoublePoint& p, const Mat& u) {
  const Certificate& c = p.a.cert;
  const int n = p.a.n();
  liealg::ParabolicData P = liealg::parabolic(c.I, n);
  MatT<D1> q = lift<D1>(Mat(inverse<cd>(c.g) * p.x * c.g));
  MatT<D1> U(n, n);
  for (Eigen::Index i = 0; i < U.size(); ++i) U(i) = D1(0.0, u(i));
  VecT<D1> vals = leaf_values<D1>(P.levi_part_t<D1>(MatT<D1>(q * expm<D1>(U))), c.I);
  Vec out(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) out(i) = vals(i).d;
  return out;
}

LogDoublePoint sample_boundary(const Subset& I, int n, Rng& rng, double scale) {
  liealg::OrthonormalBasis b = liealg::orthonormal_basis(n);
  liealg::ParabolicData P = liealg::parabolic(I, n);
  Mat g = random_group(n, rng, b, scale), h = random_group(n, rng, b, scale);
  Mat lev = span_exp(P.levi, rng, scale, n);
  Mat p = lev * span_exp(P.u, rng, scale, n);
  Mat q = span_exp(P.um, rng, scale, n) * lev;
  WonderfulPoint a;
  a.cert = {I, g, h};
  a.comps = evaluate(a.cert);
  Mat x = g * p * inverse<cd>(g), y = h * q * inverse<cd>(h);
  return {a, x, y, dbar_residual(a, x, y)};
}

LogDoublePoint sample_interior(int n, Rng& rng, double scale) {
  liealg::OrthonormalBasis b = liealg::orthonormal_basis(n);
  Mat a = random_group(n, rng, b, scale), y = random_group(n, rng, b, scale);
  WonderfulPoint w = embed(a);
  Mat x = a * y * inverse<cd>(a);
  return {w, x, y, dbar_residual(w, x, y)};
}

Layout dbar_layout(int n) {
  std::vector<int> powers;
  for (int k = 1; k < n; ++k) powers.push_back(k);
  return Layout(n, {Factor{powers, 0, 1, "a"}, Factor{{1}, 0, 0, "x"}, Factor{{1}, 1, 1, "y"}}, 2);
}

tensorcalc::BivSpec bar_bivector_spec() {
  // Slots 2 and 3 play the roles of (x, y) = (a g a^{-1}, g).
  return {Term{0.5, frame(0, Side::R), frame(1, Side::L) + frame(1, Side::R)},
          Term{0.5, frame(0, Side::L), frame(2, Side::L) + frame(2, Side::R)},
          Term{0.5, frame(1, Side::R), frame(1, Side::L)},
          Term{0.5, frame(2, Side::L), frame(2, Side::R)}};
}

Vec ambient_point(const Layout& lay, const LogDoublePoint& p) {
  Vec v(lay.dim());
  for (size_t k = 0; k < p.a.comps.size(); ++k) lay.set_block<cd>(v, 0, static_cast<int>(k), p.a.comps[k]);
  lay.set_block<cd>(v, 1, 0, p.x);
  lay.set_block<cd>(v, 2, 0, p.y);
  return v;
}

Mat bar_bivector(const LogDoublePoint& p) {
  Layout lay = dbar_layout(p.a.n());
  return tensorcalc::eval_bivector<cd>(lay, bar_bivector_spec(), ambient_point(lay, p));
}

double interior_tangency_defect(const Mat& a, const Mat& g) {
  const int n = static_cast<int>(a.rows());
  qp::QPSpace D = qp::make_double(n, true);
  Layout lay = dbar_layout(n);
  Vec x = D.layout.pack({a, g});
  auto bottom = [&](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    MatT<S> A = D.layout.block<S>(z, 0), B = D.layout.block<S>(z, 1);
    VecT<S> out(lay.dim());
    for (int k = 1; k < n; ++k) lay.set_block<S>(out, 0, k - 1, tensorcalc::wedge_power<S>(A, k));
    lay.set_block<S>(out, 1, 0, MatT<S>(A * B * inverse<S>(A)));
    lay.set_block<S>(out, 2, 0, B);
    return out;
  };
  Mat J = jacobian(bottom, x);
  Mat P = tensorcalc::eval_bivector<cd>(D.layout, D.pi, x);
  Mat Pbar = tensorcalc::eval_bivector<cd>(lay, bar_bivector_spec(), bottom(x));
  return max_abs(Mat(J * P * J.transpose() - Pbar));
}

BigbivReport bigbiv_check(const Mat& g, const Mat& h) {
  const int n = static_cast<int>(g.rows());
  Layout src(n, {Factor{{1}, -1, -1, "g"}, Factor{{1}, -1, -1, "h"}}, 0);
  Layout dst(n, {Factor{{1}, -1, -1, "1"}, Factor{{1}, -1, -1, "2"}, Factor{{1}, -1, -1, "3"}}, 0);
  const auto& b = src.basis();
  Vec x = src.pack({g, h});
  auto F = [&](const VecT<D1>& z) {
    MatT<D1> G = src.block<D1>(z, 0), H = src.block<D1>(z, 1);
    VecT<D1> out(dst.dim());
    dst.set_block<D1>(out, 0, 0, G);
    dst.set_block<D1>(out, 1, 0, MatT<D1>(H * G));
    dst.set_block<D1>(out, 2, 0, MatT<D1>(G * H));
    return out;
  };
  Mat J = jacobian(F, x);
  Vec y = dst.pack({g, Mat(h * g), Mat(g * h)});
  Mat gi = inverse<cd>(g);
  std::vector<Mat> adg, adgi;
  for (const Mat& e : b.e) {
    adg.push_back(g * e * gi);
    adgi.push_back(gi * e * g);
  }
  auto fam = [&](int f, Side s) { return tensorcalc::eval_family<cd>(dst, frame(f, s), y); };
  auto src_fam = [&](int f, Side s) { return tensorcalc::eval_family<cd>(src, frame(f, s), x); };
  BigbivReport r;
  Mat l1 = J * src_fam(0, Side::L) - (fam(0, Side::L) + fam(1, Side::L) + family_of(dst, y, 2, Side::R, adg));
  Mat l2 = J * src_fam(0, Side::R) - (fam(0, Side::R) + family_of(dst, y, 1, Side::L, adgi) + fam(2, Side::R));
  Mat l3 = J * src_fam(1, Side::L) - (family_of(dst, y, 1, Side::L, adgi) + fam(2, Side::L));
  Mat l4 = J * src_fam(1, Side::R) - (fam(1, Side::R) + family_of(dst, y, 2, Side::R, adg));
  r.lines[0] = max_abs(l1);
  r.lines[1] = max_abs(l2);
  r.lines[2] = max_abs(l3);
  r.lines[3] = max_abs(l4);
  tensorcalc::BivSpec orig{Term{0.5, frame(0, Side::L), frame(1, Side::R)}, Term{0.5, frame(0, Side::R), frame(1, Side::L)}};
  tensorcalc::BivSpec fin{Term{0.5, frame(0, Side::L), frame(1, Side::L) + frame(1, Side::R)},
                          Term{0.5, frame(0, Side::R), frame(2, Side::L) + frame(2, Side::R)},
                          Term{0.5, frame(1, Side::L), frame(1, Side::R)},
                          Term{0.5, frame(2, Side::R), frame(2, Side::L)}};
  Mat pushed = J * tensorcalc::eval_bivector<cd>(src, orig, x) * J.transpose();
  r.assembled = max_abs(Mat(pushed - tensorcalc::eval_bivector<cd>(dst, fin, y)));
  return r;
}

// ---------------------------------------------------------------------------

DbarChart::DbarChart(const Mat& g, const Mat& h, const Mat& S0, const Vec& center)
    : n_(static_cast<int>(g.rows())),
      l_(n_ - 1),
      nu_(n_ * (n_ - 1) / 2),
      N_(2 * nu_ + l_),
      g_(g),
      h_(h),
      S0_(S0),
      center_(center),
      lay_(dbar_layout(n_)) {
  if (center_.size() != 2 * N_) throw std::invalid_argument("DbarChart: center has wrong size");
  Vec p = point(center_);
  Mat J = jacobian([&](const VecT<D1>& c) { return point<D1>(c); }, center_);
  Mat Mt(lay_.dim(), 2 * N_ + l_);
  Mt.leftCols(2 * N_) = J;
  for (int k = 0; k < l_; ++k) {
    Vec s = Vec::Zero(lay_.dim());
    lay_.set_block<cd>(s, 0, k, lay_.block<cd>(p, 0, k));
    Mt.col(2 * N_ + k) = s;
  }
  if (rank(Mt) != 2 * N_ + l_) throw std::domain_error("DbarChart: chart is not an immersion");
  K0_ = Mt.adjoint();
}

DbarChart DbarChart::at(const LogDoublePoint& p) {
  const int n = p.a.n(), l = n - 1, nu = n * (n - 1) / 2;
  const Certificate& c = p.a.cert;
  Ldu a = ldu(Mat(inverse<cd>(c.g) * p.x * c.g));
  Ldu b = ldu(Mat(inverse<cd>(c.h) * p.y * c.h));
  Vec center = Vec::Zero(4 * nu + 2 * l);
  for (int i : c.I) center(nu + i - 1) = 1.0;
  auto lower = strict_pairs(n, true), upper = strict_pairs(n, false);
  for (int k = 0; k < nu; ++k) {
    center(2 * nu + l + k) = b.L(lower[k].first, lower[k].second);
    center(3 * nu + 2 * l + k) = a.U(upper[k].first, upper[k].second);
  }
  return DbarChart(c.g, c.h, a.D, center);
}

std::vector<int> DbarChart::boundary() const {
  std::vector<int> out;
  for (int i = 0; i < l_; ++i)
    if (std::abs(center_(nu_ + i)) == 0.0) out.push_back(i);
  return out;
}

template <class S> VecT<S> DbarChart::point(const VecT<S>& c) const {
  const int n = n_, l = l_, nu = nu_;
  auto lower = strict_pairs(n, true), upper = strict_pairs(n, false);
  MatT<S> V = identity<S>(n), U = identity<S>(n), Nn = identity<S>(n), M = identity<S>(n);
  for (int k = 0; k < nu; ++k) {
    V(lower[k].first, lower[k].second) = c(k);
    U(upper[k].first, upper[k].second) = c(nu + l + k);
    Nn(lower[k].first, lower[k].second) = c(2 * nu + l + k);
    M(upper[k].first, upper[k].second) = c(3 * nu + 2 * l + k);
  }
  VecT<S> w = c.segment(nu, l);
  auto wprod = [&](int from, int to) {  // prod_{m = from}^{to - 1} w_m
    S p(1.0);
    for (int m = from; m < to; ++m) p = p * w(m);
    return p;
  };
  MatT<S> tNt = identity<S>(n), tMt = identity<S>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) tNt(i, j) = Nn(i, j) * wprod(j, i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) tMt(i, j) = M(i, j) * wprod(i, j);
  VecT<S> d(n);
  for (int j = 0; j < n; ++j) {
    S s = j < l ? c(3 * nu + l + j) : S(0.0);
    S sp = j > 0 ? c(3 * nu + l + j - 1) : S(0.0);
    d(j) = exp(s - sp);
  }
  MatT<S> Sd = zeros<S>(n, n);
  for (int j = 0; j < n; ++j) Sd(j, j) = S(S0_(j, j)) * d(j);
  MatT<S> g = lift<S>(g_), h = lift<S>(h_), gi = lift<S>(Mat(inverse<cd>(g_))), hi = lift<S>(Mat(inverse<cd>(h_)));
  MatT<S> Vi = inverse<S>(V), Ui = inverse<S>(U);
  MatT<S> x = g * V * tNt * Sd * M * Vi * gi;
  MatT<S> y = h * Ui * Nn * Sd * tMt * U * hi;
  VecT<S> out(lay_.dim());
  MatT<S> left = g * V, right = U * hi;
  for (int k = 1; k <= l; ++k) {
    MatT<S> T = torus_block<S>(w, n, k);
    lay_.set_block<S>(out, 0, k - 1,
                      MatT<S>(tensorcalc::wedge_power<S>(left, k) * T * tensorcalc::wedge_power<S>(right, k)));
  }
  lay_.set_block<S>(out, 1, 0, x);
  lay_.set_block<S>(out, 2, 0, y);
  return out;
}

template VecT<cd> DbarChart::point<cd>(const VecT<cd>&) const;
template VecT<D1> DbarChart::point<D1>(const VecT<D1>&) const;
template VecT<D2> DbarChart::point<D2>(const VecT<D2>&) const;

template <class S> MatT<S> DbarChart::chart_fields(const VecT<S>& c, const VecSpec& spec) const {
  VecT<S> p = point<S>(c);
  MatT<S> J = jacobian_t<S>([&](const VecT<Dual<S>>& z) { return point<Dual<S>>(z); }, c);
  MatT<S> Mt(lay_.dim(), 2 * N_ + l_);
  Mt.leftCols(2 * N_) = J;
  for (int k = 0; k < l_; ++k) {
    VecT<S> s = VecT<S>::Constant(lay_.dim(), S(0.0));
    lay_.set_block<S>(s, 0, k, lay_.block<S>(p, 0, k));
    Mt.col(2 * N_ + k) = s;
  }
  MatT<S> K0 = lift<S>(K0_);
  MatT<S> X = tensorcalc::eval_family<S>(lay_, spec, p);
  MatT<S> sol = inverse<S>(MatT<S>(K0 * Mt)) * (K0 * X);
  return sol.topRows(2 * N_);
}

Mat DbarChart::to_chart(const Mat& ambient) const {
  Mat Mt = K0_.adjoint();
  Mat sol = inverse<cd>(Mat(K0_ * Mt)) * (K0_ * ambient);
  return sol.topRows(2 * N_);
}

double DbarChart::tangency_residual(const Mat& ambient) const {
  Mat Mt = K0_.adjoint();
  Mat sol = inverse<cd>(Mat(K0_ * Mt)) * (K0_ * ambient);
  return max_abs(Mat(ambient - Mt * sol));
}

Mat DbarChart::bivector() const {
  Mat P = tensorcalc::eval_bivector<cd>(lay_, bar_bivector_spec(), point(center_));
  Mat half = to_chart(P);
  return to_chart(Mat(half.transpose())).transpose();
}

Mat DbarChart::rho() const {
  Mat R(2 * N_, 2 * N_);
  for (int g = 0; g < 2; ++g) R.middleCols(g * N_, N_) = chart_fields<cd>(center_, tensorcalc::induced(lay_, g));
  return R;
}

Mat DbarChart::log_family(const VecSpec& spec) const {
  Mat X = chart_fields<cd>(center_, spec);
  for (int i : boundary()) {
    const int row = w_index(i);
    MatT<D1> Xd = chart_fields<D1>(seed_axis<cd>(center_, row), spec);
    for (Eigen::Index c = 0; c < X.cols(); ++c) X(row, c) = Xd(row, c).d;
  }
  return X;
}

Mat DbarChart::log_bivector() const {
  Mat P = Mat::Zero(2 * N_, 2 * N_);
  for (const Term& t : bar_bivector_spec()) {
    Mat u = log_family(t.u), v = log_family(t.v);
    Mat uv = u * v.transpose();
    P += t.coef * (uv - uv.transpose());
  }
  return P;
}

Mat DbarChart::log_rho() const {
  Mat R(2 * N_, 2 * N_);
  for (int g = 0; g < 2; ++g) R.middleCols(g * N_, N_) = log_family(tensorcalc::induced(lay_, g));
  return R;
}

qp::PointData DbarChart::point_data() const {
  const int n = n_;
  qp::PointData pd;
  pd.x = center_;
  pd.P = bivector();
  pd.R = rho();
  auto moment = [&](const VecT<D1>& c) {
    VecT<D1> p = point<D1>(c);
    MatT<D1> x = lay_.block<D1>(p, 1), y = lay_.block<D1>(p, 2);
    VecT<D1> out(2 * n * n);
    out << flat_t<D1>(x), flat_t<D1>(MatT<D1>(inverse<D1>(y)));
    return out;
  };
  Mat dPhi = jacobian(moment, center_);
  Vec p = point(center_);
  Mat x = lay_.block<cd>(p, 1), y = lay_.block<cd>(p, 2);
  qp::attach_moment(pd, {x, Mat(inverse<cd>(y))}, dPhi, lay_.basis());
  return pd;
}

LogRankReport log_nondeg_rank(const LogDoublePoint& p) {
  DbarChart chart = DbarChart::at(p);
  const int N = chart.base_dim(), d = chart.dim();
  LogRankReport r;
  Mat P = chart.bivector();
  for (int i : chart.boundary()) r.tangency = std::max(r.tangency, max_abs(Mat(P.row(chart.w_index(i)))));
  Mat Pl = chart.log_bivector(), Rl = chart.log_rho();
  Mat both(d, Pl.cols() + Rl.cols());
  both << Pl, Rl;
  r.log_rank = rank(both);
  Mat fib = Mat::Zero(d, N);
  fib.bottomRows(N) = Mat::Identity(N, N);
  Mat pf(d, Pl.cols() + N);
  pf << Pl, fib;
  r.fiber_parallel = rank(Pl) + N - rank(pf);
  r.transverse = rank(Mat(Rl.topRows(N)));
  return r;
}

}  // namespace qplab::wonderful
