#pragma once

#include "qplab/group.hpp"
#include "qplab/linalg.hpp"

namespace qplab::steinberg {

// Signed companion matrix with characteristic polynomial
// x^n - t_1 x^{n-1} + t_2 x^{n-2} - ... + (-1)^n. It lies in U c U^- for
// c = s_1 ... s_l, so the family is the cross-section itself.
template <class S> MatT<S> sigma_point(int n, const VecT<S>& t) {
  if (t.size() != n - 1) throw std::invalid_argument("sigma_point: expected n-1 parameters");
  MatT<S> m = zeros<S>(n, n);
  for (int k = 1; k < n; ++k) m(0, k - 1) = (k % 2 == 1) ? t(k - 1) : S(-t(k - 1));
  m(0, n - 1) = S(n % 2 == 1 ? 1.0 : -1.0);
  for (int i = 1; i < n; ++i) m(i, i - 1) = S(1.0);
  return m;
}

// Which copy of the cross-section a target lives on: Sigma or its image
// under inversion.
enum class Target { Sigma, InverseSigma };

template <class S> MatT<S> target_point(int n, const VecT<S>& t, Target tg) {
  MatT<S> s = sigma_point<S>(n, t);
  return tg == Target::Sigma ? s : inverse<S>(s);
}

// Parameter of the target point through h: Xi(h) or Xi(h^{-1}).
template <class S> VecT<S> target_param(const MatT<S>& h, Target tg) {
  return tg == Target::Sigma ? group::chevalley<S>(h) : group::chevalley<S>(MatT<S>(inverse<S>(h)));
}

// Residual of h from its target: distance to the reconstructed point.
inline double target_residual(const Mat& h, Target tg) {
  const int n = static_cast<int>(h.rows());
  return max_abs(Mat(h - target_point<cd>(n, target_param<cd>(h, tg), tg)));
}

}  // namespace qplab::steinberg
