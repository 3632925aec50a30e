#include "qplab/dirac.hpp"

#include <string>

namespace qplab::dirac {

double LinearDirac::pairing_defect() const {
  Mat a = vectors(), b = covectors();
  Mat g = a.transpose() * b + b.transpose() * a;
  return g.size() == 0 ? 0.0 : max_abs(g);
}

bool LinearDirac::is_graph(double rel) const { return rank(covectors(), rel) == d; }

Mat LinearDirac::to_bivector() const {
  if (dim() != d || !is_graph()) throw ConventionError("to_bivector: not the graph of a bivector");
  Mat P = vectors() * inverse<cd>(Mat(covectors()));
  return 0.5 * (P - P.transpose());
}

LinearDirac from_span(const Mat& s, double rel) {
  LinearDirac L;
  L.d = static_cast<int>(s.rows() / 2);
  L.span = column_space(s, rel);
  return L;
}

LinearDirac graph_of_bivector(const Mat& P) {
  const Eigen::Index d = P.rows();
  Mat s(2 * d, d);
  s << P, Mat::Identity(d, d);
  return from_span(s);
}

LinearDirac graph_of_form(const Mat& W) {
  const Eigen::Index d = W.rows();
  Mat s(2 * d, d);
  s << Mat::Identity(d, d), W.transpose();
  return from_span(s);
}

LinearDirac qp_dirac(const Mat& P, const Mat& R, const Mat& Cstar, const Mat& S, double tol) {
  const Eigen::Index d = P.rows();
  Mat s(2 * d, d + R.cols());
  s << P, R, Cstar, S;
  LinearDirac L = from_span(s);
  if (L.dim() != d)
    throw ConventionError("qp_dirac: span has dimension " + std::to_string(L.dim()) + ", expected " +
                          std::to_string(d));
  if (L.pairing_defect() > tol)
    throw ConventionError("qp_dirac: pairing defect " + std::to_string(L.pairing_defect()));
  return L;
}

LinearDirac backward_image(const LinearDirac& L, const Mat& j, double rel) {
  const Eigen::Index k = j.cols(), m = L.dim();
  Mat sys(L.d, m + k);
  sys << L.vectors(), -j;
  Mat N = nullspace(sys, rel);
  Mat c = N.topRows(m), X = N.bottomRows(k);
  Mat s(2 * k, N.cols());
  s << X, j.transpose() * L.covectors() * c;
  LinearDirac out = from_span(s, rel);
  if (out.dim() != k)
    throw TransversalityError("backward_image: result has dimension " + std::to_string(out.dim()) + ", expected " +
                              std::to_string(k));
  return out;
}

LinearDirac forward_image(const LinearDirac& L, const Mat& f, double rel) {
  const Eigen::Index k = f.rows(), m = L.dim();
  Mat sys(L.d, m + k);
  sys << L.covectors(), -f.transpose();
  Mat N = nullspace(sys, rel);
  Mat c = N.topRows(m), beta = N.bottomRows(k);
  Mat s(2 * k, N.cols());
  s << f * L.vectors() * c, beta;
  LinearDirac out = from_span(s, rel);
  if (out.dim() != k)
    throw TransversalityError("forward_image: result has dimension " + std::to_string(out.dim()) + ", expected " +
                              std::to_string(k));
  return out;
}

bool is_strong(const LinearDirac& L, const Mat& dPhi, double rel) {
  Mat sys(L.d + dPhi.rows(), L.dim());
  sys << L.covectors(), dPhi * L.vectors();
  Mat N = nullspace(sys, rel);
  if (N.cols() == 0) return true;
  return max_abs(Mat(L.vectors() * N)) <= rel;
}

double courant_defect(const Section& s1, const Section& s2, const Vec& x, const Array3& phi, const LinearDirac& L,
                      double twist) {
  const int d = static_cast<int>(x.size());
  Mat v1(2 * d, 1), v2(2 * d, 1);
  Mat d1(2 * d, d), d2(2 * d, d);  // column l: derivative along axis l
  for (int l = 0; l < d; ++l) {
    VecT<D1> a = s1(seed_axis<cd>(x, l));
    VecT<D1> b = s2(seed_axis<cd>(x, l));
    for (int i = 0; i < 2 * d; ++i) {
      d1(i, l) = a(i).d;
      d2(i, l) = b(i).d;
      if (l == 0) {
        v1(i, 0) = a(i).v;
        v2(i, 0) = b(i).v;
      }
    }
  }
  Vec X = v1.topRows(d), al = v1.bottomRows(d);
  Vec Y = v2.topRows(d), be = v2.bottomRows(d);
  Mat dX = d1.topRows(d), dal = d1.bottomRows(d);  // dX(k,l) = d_l X^k
  Mat dY = d2.topRows(d), dbe = d2.bottomRows(d);
  Vec br = dY * X - dX * Y;
  // (L_X beta)_k = X^l d_l beta_k + beta_l d_k X^l.
  Vec lie = dbe * X + dX.transpose() * be;
  // (iota_Y d alpha)_k = Y^l (d_l alpha_k - d_k alpha_l).
  Vec iy = dal * Y - dal.transpose() * Y;
  Vec tw = Vec::Zero(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      cd xy = X(a) * Y(b);
      if (xy == 0.0) continue;
      for (int c = 0; c < d; ++c) tw(c) += phi(a, b, c) * xy;
    }
  Mat out(2 * d, 1);
  out << br, lie - iy + twist * tw;
  return residual_outside(L.span, out);
}

}  // namespace qplab::dirac
