#include "qplab/linalg.hpp"

#include <Eigen/SVD>

namespace qplab {

namespace {

int count_above(const Eigen::VectorXd& sv, double rel) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel * sv(0)) ++r;
  return r;
}

}  // namespace

int rank(const Mat& m, double rel) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  return count_above(svd.singularValues(), rel);
}

int rank_scaled(const Mat& m, double rel, double scale) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  double cut = rel * std::max(sv(0), scale);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

Mat nullspace(const Mat& m, double rel) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return identity<cd>(n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  int r = count_above(svd.singularValues(), rel);
  return svd.matrixV().rightCols(n - r);
}

Mat column_space(const Mat& m, double rel) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  int r = count_above(svd.singularValues(), rel);
  return svd.matrixU().leftCols(r);
}

Mat pinv(const Mat& m, double rel) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Mat sinv = Mat::Zero(sv.size(), sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel * sv(0)) sinv(i, i) = 1.0 / sv(i);
  return svd.matrixV() * sinv * svd.matrixU().adjoint();
}

double subspace_distance(const Mat& a, const Mat& b, double rel) {
  Mat qa = column_space(a, rel);
  Mat qb = column_space(b, rel);
  if (qa.cols() != qb.cols()) return 1.0;
  Mat diff = qa * qa.adjoint() - qb * qb.adjoint();
  if (diff.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(diff);
  return svd.singularValues()(0);
}

double residual_outside(const Mat& basis, const Mat& v, double rel) {
  Mat q = column_space(basis, rel);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Vec col = v.col(j);
    double nv = col.norm();
    if (nv == 0.0) continue;
    Vec res = col - q * (q.adjoint() * col);
    worst = std::max(worst, res.norm() / nv);
  }
  return worst;
}

double max_abs(const Mat& m) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) out = std::max(out, std::abs(m.data()[i]));
  return out;
}

}  // namespace qplab
