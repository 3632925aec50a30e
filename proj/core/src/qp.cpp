#include "qplab/qp.hpp"

#include <stdexcept>

#include "qplab/rng.hpp"

namespace qplab::qp {

using group::Side;
using tensorcalc::Factor;
using tensorcalc::frame;
using tensorcalc::Term;

namespace {

template <class S> VecT<S> flatten(const MatT<S>& m) {
  VecT<S> v(m.size());
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) v(c * m.rows() + r) = m(r, c);
  return v;
}

template <class S> MatT<S> unflatten(const VecT<S>& v, Eigen::Index offset, int n) {
  MatT<S> m(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) m(r, c) = v(offset + c * n + r);
  return m;
}

template <class S> VecT<S> stack(const std::vector<MatT<S>>& ms) {
  Eigen::Index total = 0;
  for (const auto& m : ms) total += m.size();
  VecT<S> v(total);
  Eigen::Index o = 0;
  for (const auto& m : ms) {
    v.segment(o, m.size()) = flatten<S>(m);
    o += m.size();
  }
  return v;
}

template <class S> MatT<S> ambient_rho(const Layout& lay, const VecT<S>& y) {
  const int N = lay.basis().dim();
  MatT<S> out(lay.dim(), lay.groups() * N);
  for (int g = 0; g < lay.groups(); ++g)
    out.middleCols(g * N, N) = tensorcalc::eval_family<S>(lay, tensorcalc::induced(lay, g), y);
  return out;
}

template <class S> S kill(const MatT<S>& x, const MatT<S>& y) { return liealg::killing_t<S>(x, y); }

Mat block_diag(const std::vector<Mat>& bs) {
  Eigen::Index r = 0, c = 0;
  for (const Mat& b : bs) {
    r += b.rows();
    c += b.cols();
  }
  Mat out = Mat::Zero(r, c);
  r = c = 0;
  for (const Mat& b : bs) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

// Ambient quasi-Poisson data, templated so sections can be differentiated.
template <class S> struct AmbData {
  MatT<S> P, R, Ct, Sg;
};

template <class S> AmbData<S> amb_data(const QPSpace& M, const VecT<S>& y) {
  const Layout& lay = M.layout;
  const auto& b = lay.basis();
  const int n = lay.n(), N = b.dim(), D = lay.dim(), G = lay.groups();
  AmbData<S> out;
  out.P = tensorcalc::eval_bivector<S>(lay, M.pi, y);
  out.R = ambient_rho<S>(lay, y);
  VecT<S> mom = M.moment(y);
  MatT<S> J = jacobian_t<S>([&](const auto& z) { return M.moment(z); }, y);
  MatT<S> Theta(G * N, D);
  out.Sg.resize(D, G * N);
  for (int g = 0; g < G; ++g) {
    MatT<S> gi = inverse<S>(unflatten<S>(mom, g * n * n, n));
    for (int p = 0; p < D; ++p) {
      MatT<S> v(n, n);
      for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) v(r, c) = J(g * n * n + c * n + r, p);
      MatT<S> L = gi * v, Rr = v * gi;
      MatT<S> diff = L - Rr, sum = L + Rr;
      for (int i = 0; i < N; ++i) {
        MatT<S> e = lift<S>(b.e[i]);
        Theta(g * N + i, p) = kill<S>(e, diff);
        out.Sg(p, g * N + i) = kill<S>(e, sum) * S(0.5);
      }
    }
  }
  MatT<S> C = identity<S>(D) + out.R * Theta * S(kCeeFactor);
  out.Ct = C.transpose();
  return out;
}

}  // namespace

QPSpace make_pi_G(int n) {
  Layout lay(n, {Factor{{1}, 0, 0, "h"}}, 1);
  BivSpec pi{Term{0.5, frame(0, Side::R), frame(0, Side::L)}};
  QPSpace m{"G", lay, pi, {}, {}, false};
  m.moment = make_field<VecT>([](const auto& y) { return y; });
  return m;
}

template <class S> MatT<S> double_omega(const Layout& lay, const VecT<S>& y) {
  const int n = lay.n(), D = lay.dim();
  MatT<S> a = lay.block<S>(y, 0), bb = lay.block<S>(y, 1);
  MatT<S> ai = inverse<S>(a);
  MatT<S> v = bb * ai, vi = inverse<S>(v);
  std::vector<MatT<S>> t1L(D), t1R(D), t2L(D), t2R(D);
  for (int p = 0; p < D; ++p) {
    MatT<S> da = zeros<S>(n, n), db = zeros<S>(n, n);
    int loc = p % (n * n);
    (p < n * n ? da : db)(loc % n, loc / n) = S(1.0);
    MatT<S> dv = db * ai - v * da * ai;
    t1L[p] = ai * da;
    t1R[p] = da * ai;
    t2L[p] = vi * dv;
    t2R[p] = dv * vi;
  }
  MatT<S> W(D, D);
  for (int p = 0; p < D; ++p)
    for (int q = 0; q < D; ++q)
      W(p, q) = (kill<S>(t1L[p], t2R[q]) - kill<S>(t1L[q], t2R[p]) + kill<S>(t1R[p], t2L[q]) -
                 kill<S>(t1R[q], t2L[p])) *
                S(0.5);
  return W;
}

QPSpace make_double(int n, bool adjoint) {
  Layout lay(n, {Factor{{1}, 0, 1, "a"}, Factor{{1}, 1, 1, "b"}}, 2);
  BivSpec pi{Term{0.5, frame(0, Side::L), frame(1, Side::L) + frame(1, Side::R)},
             Term{0.5, frame(1, Side::L), frame(1, Side::R)}};
  QPSpace m{adjoint ? "D(G_ad)" : "D(G)", lay, pi, {}, {}, adjoint};
  m.moment = make_field<VecT>([lay](const auto& y) {
    using S = typename std::decay_t<decltype(y)>::Scalar;
    MatT<S> a = lay.block<S>(y, 0), b = lay.block<S>(y, 1);
    return stack<S>({MatT<S>(a * b * inverse<S>(a)), inverse<S>(b)});
  });
  m.omega = make_field<MatT>([lay](const auto& y) {
    using S = typename std::decay_t<decltype(y)>::Scalar;
    return double_omega<S>(lay, y);
  });
  return m;
}

QPSpace product(const QPSpace& a, const QPSpace& b) {
  if (a.n() != b.n()) throw std::domain_error("product: size mismatch");
  std::vector<Factor> fs = a.layout.factors();
  const int fo = a.layout.factor_count(), go = a.groups();
  for (Factor f : b.layout.factors()) {
    if (f.left >= 0) f.left += go;
    if (f.right >= 0) f.right += go;
    fs.push_back(f);
  }
  Layout lay(a.n(), fs, a.groups() + b.groups());
  BivSpec pi = a.pi;
  for (Term t : b.pi) {
    for (auto& p : t.u) p.factor += fo;
    for (auto& p : t.v) p.factor += fo;
    pi.push_back(t);
  }
  QPSpace out{a.name + "x" + b.name, lay, pi, {}, {}, a.adjoint || b.adjoint};
  const int da = a.layout.dim(), db = b.layout.dim();
  QPSpace ca = a, cb = b;
  out.moment = make_field<VecT>([ca, cb, da, db](const auto& y) {
    using S = typename std::decay_t<decltype(y)>::Scalar;
    VecT<S> ya = y.head(da), yb = y.segment(da, db);
    VecT<S> ma = ca.moment(ya), mb = cb.moment(yb);
    VecT<S> out(ma.size() + mb.size());
    out << ma, mb;
    return out;
  });
  if (a.omega && b.omega)
    out.omega = make_field<MatT>([ca, cb, da, db](const auto& y) {
      using S = typename std::decay_t<decltype(y)>::Scalar;
      VecT<S> ya = y.head(da), yb = y.segment(da, db);
      MatT<S> W = zeros<S>(da + db, da + db);
      W.topLeftCorner(da, da) = ca.omega(ya);
      W.bottomRightCorner(db, db) = cb.omega(yb);
      return W;
    });
  return out;
}

QPSpace fuse(const QPSpace& m, int g1, int g2) {
  if (g1 == g2 || g1 < 0 || g2 < 0 || g1 >= m.groups() || g2 >= m.groups())
    throw std::domain_error("fuse: needs two distinct group factors");
  BivSpec pi = m.pi;
  pi.push_back(Term{0.5 * kFusionSign, tensorcalc::induced(m.layout, g1), tensorcalc::induced(m.layout, g2)});
  auto remap = [&](int g) {
    if (g == g2) g = g1;
    return g > g2 ? g - 1 : g;
  };
  std::vector<Factor> fs = m.layout.factors();
  for (Factor& f : fs) {
    if (f.left >= 0) f.left = remap(f.left);
    if (f.right >= 0) f.right = remap(f.right);
  }
  Layout lay(m.n(), fs, m.groups() - 1);
  QPSpace out{m.name + "_fus", lay, pi, {}, {}, m.adjoint};
  const int n = m.n(), G = m.groups();
  QPSpace cm = m;
  out.moment = make_field<VecT>([cm, n, G, g1, g2](const auto& y) {
    using S = typename std::decay_t<decltype(y)>::Scalar;
    VecT<S> mom = cm.moment(y);
    std::vector<MatT<S>> ms;
    for (int g = 0; g < G; ++g) {
      if (g == g2) continue;
      MatT<S> x = unflatten<S>(mom, g * n * n, n);
      if (g == g1) x = x * unflatten<S>(mom, g2 * n * n, n);
      ms.push_back(x);
    }
    return stack<S>(ms);
  });
  return out;
}

Mat frame_of(const Layout& lay, const Vec& x) {
  const int N = lay.basis().dim();
  Mat F(lay.dim(), lay.factor_count() * N);
  for (int f = 0; f < lay.factor_count(); ++f) {
    if (lay.factor(f).powers.size() != 1 || lay.factor(f).powers[0] != 1)
      throw std::domain_error("frame_of: factor is not a group");
    F.middleCols(f * N, N) = tensorcalc::eval_family<cd>(lay, frame(f, Side::L), x);
  }
  return F;
}

Mat frame_inverse(const Layout& lay, const Vec& x) {
  const auto& b = lay.basis();
  const int n = lay.n(), N = b.dim();
  Mat out = Mat::Zero(lay.factor_count() * N, lay.dim());
  for (int f = 0; f < lay.factor_count(); ++f) {
    Mat ai = inverse<cd>(lay.block<cd>(x, f));
    const int o = lay.offset(f, 0);
    for (int i = 0; i < N; ++i) {
      Mat ea = b.e[i] * ai * (2.0 * n);
      for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) out(f * N + i, o + c * n + r) = ea(c, r);
    }
  }
  return out;
}

std::vector<Mat> moment_mats(const QPSpace& m, const Vec& x) {
  Vec mom = m.moment(x);
  std::vector<Mat> out;
  for (int g = 0; g < m.groups(); ++g) out.push_back(unflatten<cd>(mom, g * m.n() * m.n(), m.n()));
  return out;
}

void attach_moment(PointData& pd, const std::vector<Mat>& phi, const Mat& dPhiF, const liealg::OrthonormalBasis& b) {
  const int n = b.n, N = b.dim(), G = static_cast<int>(phi.size());
  const int d = static_cast<int>(dPhiF.cols());
  pd.Phi = phi;
  pd.dPhiF = dPhiF;
  pd.dPhi.resize(G * N, d);
  pd.Theta.resize(G * N, d);
  pd.Sigma.resize(d, G * N);
  for (int g = 0; g < G; ++g) {
    Mat gi = inverse<cd>(phi[g]);
    for (int q = 0; q < d; ++q) {
      Vec col = dPhiF.col(q);
      Mat v = unflatten<cd>(col, g * n * n, n);
      Mat L = gi * v, Rr = v * gi;
      for (int i = 0; i < N; ++i) {
        pd.dPhi(g * N + i, q) = kill<cd>(b.e[i], L);
        pd.Theta(g * N + i, q) = kill<cd>(b.e[i], Mat(L - Rr));
        pd.Sigma(q, g * N + i) = 0.5 * kill<cd>(b.e[i], Mat(L + Rr));
      }
    }
  }
  pd.C = Mat::Identity(d, d) + kCeeFactor * pd.R * pd.Theta;
}

PointData point_data(const QPSpace& m, const Vec& x) {
  const Layout& lay = m.layout;
  PointData pd;
  pd.x = x;
  pd.F = frame_of(lay, x);
  pd.Finv = frame_inverse(lay, x);
  Mat Pamb = tensorcalc::eval_bivector<cd>(lay, m.pi, x);
  pd.P = pd.Finv * Pamb * pd.Finv.transpose();
  pd.R = pd.Finv * ambient_rho<cd>(lay, x);
  Mat J = jacobian([&](const VecT<D1>& y) { return m.moment(y); }, x);
  attach_moment(pd, moment_mats(m, x), J * pd.F, lay.basis());
  if (m.omega) pd.W = Mat(pd.F.transpose() * m.omega(x) * pd.F);
  return pd;
}

dirac::LinearDirac qp_dirac(const PointData& pd) {
  return dirac::qp_dirac(pd.P, pd.R, pd.C.transpose(), pd.Sigma);
}

Array3 eta_pullback(const PointData& pd, const liealg::OrthonormalBasis& b) {
  Array3 C = liealg::structure_constants(b);
  const int N = b.dim(), d = pd.d();
  Array3 out(d);
  for (size_t g = 0; g < pd.Phi.size(); ++g) {
    Array3 part = contract(C, pd.dPhi.middleRows(g * N, N));
    for (size_t k = 0; k < out.a.size(); ++k) out.a[k] += 0.5 * part.a[k];
  }
  return out;
}

double verify_qp_identity(const QPSpace& m, const Vec& x) {
  const Layout& lay = m.layout;
  auto pi = [&](const auto& y) {
    using S = typename std::decay_t<decltype(y)>::Scalar;
    return tensorcalc::eval_bivector<S>(lay, m.pi, y);
  };
  Array3 sch = tensorcalc::schouten(pi, pi, x);
  Mat R = ambient_rho<cd>(lay, x);
  const int N = lay.basis().dim();
  Array3 phi(lay.dim());
  for (int g = 0; g < lay.groups(); ++g) {
    Array3 part = tensorcalc::cartan_field(R.middleCols(g * N, N), lay.basis());
    for (size_t k = 0; k < phi.a.size(); ++k) phi.a[k] += part.a[k];
  }
  return max_abs_diff(sch, phi);
}

namespace {
void require_omega(const QPSpace& m) {
  if (!m.omega) throw std::domain_error("space carries no 2-form");
}
}  // namespace

double verify_Q1(const QPSpace& m, const Vec& x) {
  require_omega(m);
  PointData pd = point_data(m, x);
  Array3 dw = tensorcalc::ext_d2([&](const VecT<D1>& y) { return m.omega(y); }, x);
  Array3 dF = contract(dw, pd.F);
  Array3 eta = eta_pullback(pd, m.layout.basis());
  double out = 0.0;
  for (size_t k = 0; k < dF.a.size(); ++k) out = std::max(out, std::abs(dF.a[k] + eta.a[k]));
  return out;
}

double verify_Q2(const QPSpace& m, const Vec& x) {
  require_omega(m);
  PointData pd = point_data(m, x);
  Mat lhs = pd.W->transpose() * pd.R;
  return max_abs(Mat(lhs - pd.Sigma));
}

Q3Result verify_Q3(const QPSpace& m, const Vec& x) {
  require_omega(m);
  PointData pd = point_data(m, x);
  const auto& b = m.layout.basis();
  std::vector<Mat> ads;
  for (const Mat& g : pd.Phi) ads.push_back(group::ad_matrix(g, b));
  Mat A = block_diag(ads);
  Mat Nx = nullspace(Mat(A + Mat::Identity(A.rows(), A.cols())));
  Mat ker = nullspace(*pd.W);
  Q3Result r;
  r.kernel_dim = static_cast<int>(ker.cols());
  Mat pred = Nx.cols() ? Mat(pd.R * Nx) : Mat(pd.d(), 0);
  r.predicted_dim = pred.cols() ? rank(pred) : 0;
  if (r.kernel_dim > 0 || r.predicted_dim > 0) r.distance = subspace_distance(ker, pred);
  return r;
}

int nondeg_rank(const QPSpace& m, const Vec& x) {
  PointData pd = point_data(m, x);
  Mat s(pd.d(), pd.P.cols() + pd.R.cols());
  s << pd.P, pd.R;
  return rank(s);
}

double check_compat(const QPSpace& m, const Vec& x) {
  require_omega(m);
  PointData pd = point_data(m, x);
  return max_abs(Mat(pd.P * pd.W->transpose() - pd.C));
}

double forward_dirac_defect(const QPSpace& m, const Vec& x) {
  PointData pd = point_data(m, x);
  QPSpace target = make_pi_G(m.n());
  for (int g = 1; g < m.groups(); ++g) target = product(target, make_pi_G(m.n()));
  Vec y = stack<cd>(pd.Phi);
  PointData pt = point_data(target, y);
  dirac::LinearDirac pushed = dirac::forward_image(qp_dirac(pd), pd.dPhi);
  dirac::LinearDirac expected = qp_dirac(pt);
  return subspace_distance(pushed.span, expected.span);
}

double courant_probe(const QPSpace& m, const Vec& x, int pairs, unsigned seed, double twist) {
  const Layout& lay = m.layout;
  const int D = lay.dim(), n = lay.n();
  const int K = m.groups() * lay.basis().dim();
  AmbData<cd> a0 = amb_data<cd>(m, x);
  Mat F = frame_of(lay, x);
  Mat ann = nullspace(Mat(F.transpose()));
  Mat span(2 * D, D + K + ann.cols());
  span << a0.P, a0.R, Mat::Zero(D, ann.cols()), a0.Ct, a0.Sg, ann;
  dirac::LinearDirac L = dirac::from_span(span);
  if (L.dim() != D) throw dirac::ConventionError("courant_probe: ambient structure has wrong dimension");

  // phi = -Phi^* eta on ambient vectors.
  Vec mom = m.moment(x);
  Mat J = jacobian([&](const VecT<D1>& y) { return m.moment(y); }, x);
  Array3 phi(D);
  for (int g = 0; g < m.groups(); ++g) {
    Mat gi = inverse<cd>(unflatten<cd>(mom, g * n * n, n));
    std::vector<Mat> A(D);
    for (int p = 0; p < D; ++p) {
      Vec col = J.col(p);
      A[p] = gi * unflatten<cd>(col, g * n * n, n);
    }
    for (int p = 0; p < D; ++p)
      for (int q = 0; q < D; ++q) {
        Mat pq = A[p] * A[q];
        for (int r = 0; r < D; ++r) {
          cd e = static_cast<double>(n) * ((pq * A[r]).trace() - (A[p] * A[r] * A[q]).trace());
          phi(p, q, r) -= e;
        }
      }
  }

  Rng rng(seed);
  auto make_section = [&](const Vec& alpha, const Vec& xi) -> dirac::Section {
    return [&m, alpha, xi](const VecT<D1>& y) {
      AmbData<D1> ad = amb_data<D1>(m, y);
      VecT<D1> al = lift<D1>(alpha), z = lift<D1>(xi);
      VecT<D1> X = ad.P * al + ad.R * z;
      VecT<D1> be = ad.Ct * al + ad.Sg * z;
      VecT<D1> out(2 * X.size());
      out << X, be;
      return out;
    };
  };
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    Vec a1 = rng.complex_vector(D), x1 = rng.complex_vector(K);
    Vec a2 = rng.complex_vector(D), x2 = rng.complex_vector(K);
    worst = std::max(worst, dirac::courant_defect(make_section(a1, x1), make_section(a2, x2), x, phi, L, twist));
  }
  return worst;
}

double invariance_defect(const QPSpace& m, const Vec& x) {
  const Layout& lay = m.layout;
  const int N = lay.basis().dim();
  Mat P = tensorcalc::eval_bivector<cd>(lay, m.pi, x);
  Mat R = ambient_rho<cd>(lay, x);
  double worst = 0.0;
  for (int c = 0; c < R.cols(); ++c) {
    Vec X = R.col(c);
    Mat dP = tangent<cd>(tensorcalc::eval_bivector<D1>(lay, m.pi, seed<cd>(x, X)));
    Mat DX = jacobian(
        [&](const VecT<D1>& y) {
          MatT<D1> r = ambient_rho<D1>(lay, y);
          return VecT<D1>(r.col(c));
        },
        x);
    Mat L = dP - DX * P - P * DX.transpose();
    worst = std::max(worst, max_abs(L));
  }
  (void)N;
  return worst;
}

OneSidedSlice make_one_sided_slice(int n, const Mat& a, const Vec& t, steinberg::Target target) {
  QPSpace D = make_double(n);
  const auto& b = D.layout.basis();
  const int N = b.dim(), l = n - 1;
  OneSidedSlice s;
  s.n = n;
  s.target = target;
  s.a = a;
  s.t = t;
  s.b = steinberg::target_point<cd>(n, t, target);
  Vec x = D.layout.pack({a, s.b});
  PointData full = point_data(D, x);

  Mat dB = jacobian([&](const VecT<D1>& u) { return flatten<D1>(steinberg::target_point<D1>(n, u, target)); }, t);
  Mat bi = inverse<cd>(s.b);
  s.j = Mat::Zero(2 * N, N + l);
  s.j.topLeftCorner(N, N) = Mat::Identity(N, N);
  for (int k = 0; k < l; ++k) {
    Vec col = dB.col(k);
    s.j.block(N, N + k, N, 1) = b.coords<cd>(Mat(bi * unflatten<cd>(col, 0, n)));
  }
  dirac::LinearDirac L = dirac::backward_image(qp_dirac(full), s.j);
  Mat A = L.vectors(), B = L.covectors();
  if (rank(B) < N + l) throw dirac::ConventionError("one-sided slice: pulled-back structure is not a graph");
  s.Q = A * inverse<cd>(B);

  s.R = Mat::Zero(N + l, N);
  Mat ai = inverse<cd>(a);
  for (int i = 0; i < N; ++i)
    s.R.block(0, i, N, 1) = tensorcalc::kActionSign * b.coords<cd>(Mat(ai * b.e[i] * a));
  Vec z0 = Vec::Zero(N + l);
  Mat Jm = jacobian(
      [&](const VecT<D1>& z) {
        MatT<D1> aa = lift<D1>(a) * expm<D1>(b.element<D1>(VecT<D1>(z.head(N))));
        VecT<D1> tt = lift<D1>(t) + z.tail(l);
        MatT<D1> bb = steinberg::target_point<D1>(n, tt, target);
        return flatten<D1>(MatT<D1>(aa * bb * inverse<D1>(aa)));
      },
      z0);
  s.pd.R = s.R;
  attach_moment(s.pd, {Mat(a * s.b * ai)}, Jm, b);
  s.P = s.Q * s.pd.C.transpose();
  s.pd.P = s.P;
  s.rho_defect = max_abs(Mat(s.R - s.Q * s.pd.Sigma));
  s.skew_defect = max_abs(Mat(s.P + s.P.transpose()));
  return s;
}

Mat slice_tangent(const PointData& pd, const std::vector<steinberg::Target>& targets,
                  const liealg::OrthonormalBasis& b) {
  const int n = b.n, N = b.dim(), l = n - 1, d = pd.d();
  Mat cons(0, d);
  for (size_t f = 0; f < targets.size(); ++f) {
    Vec tf = steinberg::target_param<cd>(pd.Phi[f], targets[f]);
    Mat dT = jacobian([&](const VecT<D1>& u) { return flatten<D1>(steinberg::target_point<D1>(n, u, targets[f])); }, tf);
    Mat gi = inverse<cd>(pd.Phi[f]);
    Mat Tf(N, l);
    for (int k = 0; k < l; ++k) {
      Vec col = dT.col(k);
      Tf.col(k) = b.coords<cd>(Mat(gi * unflatten<cd>(col, 0, n)));
    }
    // tangent directions of the target, removed from the moment differential
    Mat perp = nullspace(Mat(Tf.adjoint()));
    Mat c = perp.adjoint() * pd.dPhi.middleRows(f * N, N);
    Mat grown(cons.rows() + c.rows(), d);
    grown << cons, c;
    cons = grown;
  }
  return nullspace(cons);
}

ReductionResult reduction_check(const QPSpace& m, const Vec& x, const std::vector<steinberg::Target>& targets) {
  using steinberg::Target;
  const auto& b = m.layout.basis();
  const int n = m.n(), N = b.dim(), l = n - 1, G = m.groups();
  if (static_cast<int>(targets.size()) != G) throw std::invalid_argument("reduction_check: one target per group");
  PointData pm = point_data(m, x);
  const int dM = pm.d();
  ReductionResult res;

  std::vector<OneSidedSlice> slices;
  std::vector<Mat> mu;
  for (int f = 0; f < G; ++f) {
    Target tp = targets[f] == Target::Sigma ? Target::InverseSigma : Target::Sigma;
    Mat binv = inverse<cd>(pm.Phi[f]);
    Vec tf = steinberg::target_param<cd>(binv, tp);
    slices.push_back(make_one_sided_slice(n, Mat::Identity(n, n), tf, tp));
    mu.push_back(slices.back().b);
    res.j_defect = std::max(res.j_defect, max_abs(Mat(pm.Phi[f] * mu.back() - Mat::Identity(n, n))));
  }

  const int dS = N + l, dN = dM + G * dS;
  PointData pn;
  std::vector<Mat> blocks{pm.P};
  for (const auto& s : slices) blocks.push_back(s.P);
  pn.P = block_diag(blocks);
  pn.R = Mat::Zero(dN, G * N);
  Mat dJF = Mat::Zero(G * n * n, dN);
  std::vector<Mat> J;
  for (int f = 0; f < G; ++f) {
    Mat rm = Mat::Zero(dN, N), rs = Mat::Zero(dN, N);
    rm.topRows(dM) = pm.R.middleCols(f * N, N);
    rs.middleRows(dM + f * dS, dS) = slices[f].R;
    pn.P += 0.5 * kFusionSign * (rm * rs.transpose() - rs * rm.transpose());
    pn.R.middleCols(f * N, N) = rm + rs;
    J.push_back(pm.Phi[f] * mu[f]);
    for (int q = 0; q < dM; ++q) {
      Vec col = pm.dPhiF.col(q);
      dJF.block(f * n * n, q, n * n, 1) = flatten<cd>(Mat(unflatten<cd>(col, f * n * n, n) * mu[f]));
    }
    for (int q = 0; q < dS; ++q) {
      Vec col = slices[f].pd.dPhiF.col(q);
      dJF.block(f * n * n, dM + f * dS + q, n * n, 1) = flatten<cd>(Mat(pm.Phi[f] * unflatten<cd>(col, 0, n)));
    }
  }
  attach_moment(pn, J, dJF, b);
  dirac::LinearDirac LN = qp_dirac(pn);

  Mat T = slice_tangent(pm, targets, b);
  const int mdim = static_cast<int>(T.cols());
  res.pi_direct = dirac::backward_image(qp_dirac(pm), T).to_bivector();

  // Derivative of the embedding m -> (m, 1, Phi(m)^{-1}).
  Mat ds = Mat::Zero(dN, mdim);
  ds.topRows(dM) = T;
  for (int f = 0; f < G; ++f) {
    Target tp = slices[f].target;
    Mat phi = pm.Phi[f];
    Mat dt = jacobian(
        [&](const VecT<D1>& u) {
          MatT<D1> g = lift<D1>(phi) * expm<D1>(b.element<D1>(u));
          return steinberg::target_param<D1>(MatT<D1>(inverse<D1>(g)), tp);
        },
        Vec(Vec::Zero(N)));
    ds.block(dM + f * dS + N, 0, l, mdim) = dt * pm.dPhi.middleRows(f * N, N) * T;
  }
  Mat K = nullspace(pn.dPhi);
  Mat Bm(dN, mdim + G * N);
  Bm << ds, pn.R;
  double inside = residual_outside(K, Bm);
  Mat Bk = K.adjoint() * Bm;
  if (Bk.rows() != Bk.cols() || inside > 1e-6)
    throw dirac::TransversalityError("reduction_check: embedding and orbit do not span the level set");
  Mat q = inverse<cd>(Bk).topRows(mdim);
  dirac::LinearDirac LK = dirac::backward_image(LN, K);
  res.pi_reduced = dirac::forward_image(LK, q).to_bivector();
  res.bivector_defect = max_abs(Mat(res.pi_direct - res.pi_reduced));
  return res;
}

}  // namespace qplab::qp
