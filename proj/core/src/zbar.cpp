#include "qplab/zbar.hpp"

#include <map>

#include "qplab/qp.hpp"

namespace qplab::zbar {

using wonderful::DbarChart;
using wonderful::LogDoublePoint;
using wonderful::MembershipError;

ZbarPoint zbar_membership(const WonderfulPoint& a, const Mat& h, double tol) {
  double rs = steinberg::target_residual(h, steinberg::Target::Sigma);
  if (rs > tol) throw MembershipError("zbar_membership: h is off the cross-section", rs);
  LogDoublePoint p = wonderful::dbar_membership(a, h, h, tol);
  ZbarPoint z;
  z.a = a;
  z.h = h;
  z.I = a.cert.I;
  z.leaf = wonderful::leaf_functional(p, tol);
  z.residual = std::max(rs, p.residual);
  return z;
}

double delta_residual(const Mat& g, const Mat& h) {
  return max_abs(Mat(group::chevalley<cd>(g) - group::chevalley<cd>(Mat(inverse<cd>(h)))));
}

bool delta_membership(const Mat& g, const Mat& h, double tol) { return delta_residual(g, h) <= tol; }

LeafValue leaf_map(const ZbarPoint& p, double tol) {
  LogDoublePoint q = wonderful::dbar_membership(p.a, p.h, p.h, tol);
  return wonderful::leaf_functional(q, tol);
}

ZbarChart::ZbarChart(int n) : n_(n), lay_(wonderful::dbar_layout(n)) {}

LogDoublePoint ZbarChart::dbar_point(const Vec& y) const {
  const int l = n_ - 1;
  auto [lam, g] = diagonalize<cd>(n_, Vec(y.head(l)));
  Subset I;
  Mat tau = Mat::Identity(n_, n_);
  for (int i = 0; i < l; ++i) {
    cd w = y(l + i);
    if (w != 0.0) I.push_back(i + 1);
    tau(i + 1, i + 1) = tau(i, i) * (w != 0.0 ? w : cd(1.0));
  }
  Vec amb = point(y);
  WonderfulPoint a;
  for (int k = 0; k < l; ++k) a.comps.push_back(lay_.block<cd>(amb, 0, k));
  a.comps = wonderful::normalize(a.comps);
  a.cert = {I, Mat(g * tau), g};
  Mat s = lay_.block<cd>(amb, 1, 0);
  return {a, s, s, wonderful::dbar_residual(a, s, s)};
}

ZbarPoint ZbarChart::zbar_point(const Vec& y) const {
  LogDoublePoint p = dbar_point(y);
  return zbar_membership(p.a, p.x);
}

DbarChart ZbarChart::dbar_chart(const Vec& y) const {
  const int l = n_ - 1, nu = n_ * (n_ - 1) / 2;
  auto [lam, g] = diagonalize<cd>(n_, Vec(y.head(l)));
  Vec c = Vec::Zero(4 * nu + 2 * l);
  for (int i = 0; i < l; ++i) c(nu + i) = y(l + i);
  return DbarChart(g, g, Mat(lam.asDiagonal()), c);
}

Mat ZbarChart::frame_jacobian(const Vec& y) const {
  Mat J = jacobian([&](const VecT<D1>& z) { return point<D1>(z); }, y);
  return dbar_chart(y).to_chart(J);
}

dirac::LinearDirac ZbarChart::dirac_at(const Vec& y) const {
  DbarChart ch = dbar_chart(y);
  Mat J = jacobian([&](const VecT<D1>& z) { return point<D1>(z); }, y);
  return dirac::backward_image(qp::qp_dirac(ch.point_data()), ch.to_chart(J));
}

Mat ZbarChart::bivector(const Vec& y) const {
  dirac::LinearDirac L = dirac_at(y);
  if (!L.is_graph()) throw dirac::ConventionError("ZbarChart: pulled-back structure is not a bivector graph");
  return L.to_bivector();
}

Vec ZbarChart::leaf(const Vec& y, const Subset& I) const {
  const int l = n_ - 1;
  Vec z = y;
  for (int i = 0; i < l; ++i)
    if (std::find(I.begin(), I.end(), i + 1) == I.end()) z(l + i) = 0.0;
  return wonderful::leaf_functional(dbar_point(z)).values;
}

LogSymplecticReport log_symplectic_check(const ZbarChart& chart, const Vec& y, double step, double rank_tol) {
  const int l = chart.l(), d = chart.dim();
  LogSymplecticReport r;
  LogDoublePoint p = chart.dbar_point(y);
  r.I = p.a.cert.I;
  r.membership = p.residual;
  dirac::LinearDirac L = chart.dirac_at(y);
  r.graph = L.is_graph();
  if (!r.graph) return r;
  Mat P = L.to_bivector();
  r.rank = rank_scaled(P, rank_tol);

  std::vector<bool> bnd(d, false);
  for (int i = 0; i < l; ++i) bnd[l + i] = y(l + i) == 0.0;
  for (int a = 0; a < d; ++a)
    if (bnd[a]) r.tangency = std::max(r.tangency, max_abs(Mat(P.row(a))));

  // Divide by w for each vanishing w among the two indices, as a limit.
  std::map<std::vector<int>, Mat> cache;
  auto at = [&](const std::vector<int>& shift) -> const Mat& {
    auto it = cache.find(shift);
    if (it != cache.end()) return it->second;
    Vec z = y;
    for (int a = 0; a < d; ++a) z(a) += static_cast<double>(shift[a]) * step;
    return cache.emplace(shift, chart.bivector(z)).first->second;
  };
  Mat Plog = P;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::vector<int> idx;
      if (bnd[a]) idx.push_back(a);
      if (bnd[b] && b != a) idx.push_back(b);
      if (idx.empty() || a == b) continue;
      cd acc = 0.0;
      const int m = static_cast<int>(idx.size());
      for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<int> shift(d, 0);
        double sign = 1.0;
        for (int q = 0; q < m; ++q) {
          bool minus = (mask >> q) & 1;
          shift[idx[q]] = minus ? -1 : 1;
          if (minus) sign = -sign;
        }
        acc += sign * at(shift)(a, b);
      }
      Plog(a, b) = acc / std::pow(2.0 * step, m);
    }
  r.log_rank = rank_scaled(Plog, rank_tol);

  r.jacobi = tensorcalc::schouten_fd([&](const Vec& z) { return chart.bivector(z); }, y, step).max_abs();

  for (int k = 0; k < d; ++k) {
    Vec v = P.col(k);
    Vec dl = (chart.leaf(Vec(y + step * v), r.I) - chart.leaf(Vec(y - step * v), r.I)) / (2.0 * step);
    if (dl.size()) r.leaf_variation = std::max(r.leaf_variation, dl.cwiseAbs().maxCoeff());
  }
  return r;
}

SncReport snc_check(const ZbarChart& chart, const Vec& t) {
  const int l = chart.l(), d = chart.dim();
  SncReport r;
  r.min_immersion_rank = d;
  for (int mask = 0; mask < (1 << l); ++mask) {
    Vec y(d);
    y.head(l) = t;
    for (int i = 0; i < l; ++i) y(l + i) = ((mask >> i) & 1) ? 1.0 : 0.0;
    LogDoublePoint p = chart.dbar_point(y);
    std::vector<int> sig = wonderful::rank_signature(p.a);
    for (int i = 0; i < l; ++i)
      if ((sig[i] == 1) != (y(l + i) == 0.0)) r.divisors_match = false;
    Mat J = chart.frame_jacobian(y);
    r.min_immersion_rank = std::min(r.min_immersion_rank, rank(J));
    if (mask == 0) {
      DbarChart ch = chart.dbar_chart(y);
      Mat rows(l, d);
      for (int i = 0; i < l; ++i) rows.row(i) = J.row(ch.w_index(i));
      r.crossing_rank = rank(rows);
    }
  }
  return r;
}

}  // namespace qplab::zbar
