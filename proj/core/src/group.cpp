#include "qplab/group.hpp"

#include <cmath>
#include <stdexcept>

namespace qplab::group {

Mat det_normalize(const Mat& g) {
  cd det = determinant<cd>(g);
  if (std::abs(det) == 0.0) throw std::domain_error("det_normalize: singular matrix");
  return g * std::pow(det, -1.0 / static_cast<double>(g.rows()));
}

Mat group_exp(const Mat& base, const Mat& x) { return det_normalize(base * expm<cd>(x)); }

Mat maurer_cartan(Side side, const Mat& h, const Mat& v) {
  if (std::abs(determinant<cd>(h)) < 1e-14) throw std::domain_error("maurer_cartan: singular base point");
  return theta_t<cd>(side, h, v);
}

cd eta(const Mat& h, const Mat& u, const Mat& v, const Mat& w, Side side) {
  Mat tu = maurer_cartan(side, h, u), tv = maurer_cartan(side, h, v), tw = maurer_cartan(side, h, w);
  return 0.5 * liealg::killing_t<cd>(tu, commutator<cd>(tv, tw));
}

Mat centralizer_algebra(const Mat& h, const liealg::OrthonormalBasis& b, double rel) {
  const int d = b.dim();
  Mat m(d, d);
  Mat hi = inverse<cd>(h);
  for (int j = 0; j < d; ++j) m.col(j) = b.coords<cd>(Mat(h * b.e[j] * hi - b.e[j]));
  return nullspace(m, rel);
}

bool is_regular(const Mat& h, const liealg::OrthonormalBasis& b, double rel) {
  return centralizer_algebra(h, b, rel).cols() == b.n - 1;
}

Mat ad_matrix(const Mat& g, const liealg::OrthonormalBasis& b) {
  const int d = b.dim();
  Mat m(d, d);
  Mat gi = inverse<cd>(g);
  for (int j = 0; j < d; ++j) m.col(j) = b.coords<cd>(Mat(g * b.e[j] * gi));
  return m;
}

double projective_distance(const Mat& a, const Mat& b) {
  cd bb = b.squaredNorm();
  if (std::abs(bb) == 0.0 || a.norm() == 0.0) return 1.0;
  cd c = (b.adjoint() * a).trace() / bb;
  return (a - c * b).norm() / a.norm();
}

}  // namespace qplab::group
