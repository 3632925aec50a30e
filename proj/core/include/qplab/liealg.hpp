#pragma once

#include <vector>

#include "qplab/linalg.hpp"
#include "qplab/types.hpp"

namespace qplab::liealg {

// 1-based simple-root indices, sorted.
using Subset = std::vector<int>;

// Killing form of sl(n), 2n tr(xy). Throws std::domain_error on inputs that
// are not traceless.
cd killing(const Mat& x, const Mat& y);

template <class S> S killing_t(const MatT<S>& x, const MatT<S>& y) {
  S t(0.0);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < x.cols(); ++k) t += x(i, k) * y(k, i);
  return t * S(2.0 * static_cast<double>(x.rows()));
}

struct OrthonormalBasis {
  int n = 0;
  std::vector<Mat> e;
  Mat gram;

  int dim() const { return static_cast<int>(e.size()); }
  // Coefficients of x in the basis: (e_i, x).
  template <class S> VecT<S> coords(const MatT<S>& x) const {
    VecT<S> c(dim());
    for (int i = 0; i < dim(); ++i) c(i) = killing_t<S>(lift<S>(e[i]), x);
    return c;
  }
  template <class S> MatT<S> element(const VecT<S>& c) const {
    MatT<S> x = zeros<S>(n, n);
    for (int i = 0; i < dim(); ++i) x += lift<S>(e[i]) * c(i);
    return x;
  }
};

OrthonormalBasis orthonormal_basis(int n);

// C_ijk = (e_i, [e_j, e_k]).
Array3 structure_constants(const OrthonormalBasis& b);

// phi = 1/12 C_ijk e_i^e_j^e_k stored without 1/k! weights, so the
// components are C_ijk / 2.
struct CartanTrivector {
  Array3 components;
};
CartanTrivector cartan_trivector(const OrthonormalBasis& b);

struct RootDatum {
  int n = 0;
  int l = 0;
  std::vector<Eigen::VectorXd> simple_roots;        // epsilon_i - epsilon_{i+1}
  std::vector<Mat> fundamental_coweights;           // traceless diagonal
  std::vector<int> coxeter_word;                    // s_1 s_2 ... s_l
  Mat coxeter_rep;                                  // signed permutation, det 1
};
RootDatum root_datum(int n);

struct ParabolicData {
  int n = 0;
  Subset I;
  std::vector<int> block_of;     // block index of each row/column
  std::vector<int> block_sizes;
  std::vector<Mat> p, pm, u, um, levi, levi_center;

  int blocks() const { return static_cast<int>(block_sizes.size()); }
  // Off-pattern residuals; zero iff x lies in the block upper (lower) pattern.
  double lower_residual(const Mat& x) const;
  double upper_residual(const Mat& x) const;
  Mat levi_part(const Mat& x) const;
  template <class S> MatT<S> levi_part_t(const MatT<S>& x) const {
    MatT<S> out = zeros<S>(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (block_of[r] == block_of[c]) out(r, c) = x(r, c);
    return out;
  }
};
ParabolicData parabolic(const Subset& I, int n);

struct WeightBasis {
  std::vector<Mat> E;                       // E_ij (i != j) then Cartan vectors
  std::vector<Eigen::VectorXd> weights;     // weight of each E under diag(t)
  std::vector<Mat> dual;                    // theta_alpha as matrices: theta(x) = tr(dual * x)
};
WeightBasis weight_basis(int n);

// Block decomposition induced by I: i in I joins positions i and i+1.
std::vector<int> blocks_of(const Subset& I, int n);
Subset full_subset(int n);
Subset complement(const Subset& I, int n);

}  // namespace qplab::liealg
