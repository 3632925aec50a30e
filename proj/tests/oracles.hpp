#pragma once

// Test-side reference computations. Nothing here calls into the library
// beyond plain types, so agreement is evidence rather than tautology.

#include <algorithm>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qplab/rng.hpp"
#include "qplab/types.hpp"

namespace oracle {

using qplab::cd;
using qplab::Mat;
using qplab::Vec;

// Central differences of a vector map.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h = 1e-6) {
  Vec f0 = f(x);
  Mat J(f0.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    J.col(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

inline Vec flat(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) s.push_back(i);
    out.push_back(s);
  }
  // lexicographic
  std::sort(out.begin(), out.end());
  return out;
}

// k x k minors, rows and columns in lexicographic subset order.
inline Mat minors(const Mat& g, int k) {
  auto s = subsets(static_cast<int>(g.rows()), k);
  Mat out(s.size(), s.size());
  for (size_t r = 0; r < s.size(); ++r)
    for (size_t c = 0; c < s.size(); ++c) {
      Mat sub(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = g(s[r][i], s[c][j]);
      out(r, c) = sub.determinant();
    }
  return out;
}

inline Mat expm(const Mat& x) {
  Mat term = Mat::Identity(x.rows(), x.cols()), sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

inline Mat random_traceless(int n, qplab::Rng& rng, double scale) {
  Mat x(n, n);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.complex_normal() * scale;
  x -= Mat::Identity(n, n) * (x.trace() / static_cast<double>(n));
  return x;
}

inline Mat random_sl(int n, qplab::Rng& rng, double scale = 0.5) { return expm(random_traceless(n, rng, scale)); }

inline Mat bracket(const Mat& a, const Mat& b) { return a * b - b * a; }

}  // namespace oracle
