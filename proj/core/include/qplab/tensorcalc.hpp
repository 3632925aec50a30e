#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qplab/group.hpp"
#include "qplab/liealg.hpp"
#include "qplab/linalg.hpp"

namespace qplab::tensorcalc {

using group::Side;

// Infinitesimal action sign: xi_M(m) = d/dt exp(t xi) . m. Flip to -1 for
// the opposite convention.
inline constexpr double kActionSign = 1.0;

// k-th exterior power of a matrix on the basis e_S, S running over sorted
// k-subsets in lexicographic order; entries are k x k minors.
std::vector<std::vector<int>> k_subsets(int n, int k);
template <class S> MatT<S> wedge_power(const MatT<S>& g, int k) {
  const int n = static_cast<int>(g.rows());
  auto sets = k_subsets(n, k);
  const int m = static_cast<int>(sets.size());
  MatT<S> out(m, m);
  MatT<S> sub(k, k);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = g(sets[a][i], sets[b][j]);
      out(a, b) = determinant<S>(sub);
    }
  return out;
}
// Derived representation on the k-th exterior power.
Mat wedge_derived(const Mat& x, int k);
int binomial(int n, int k);

// A manifold factor: a tuple of square matrices A_b of size C(n, power_b),
// acted on by (g, h) as A_b -> wedge^{power_b}(g) A_b wedge^{power_b}(h)^{-1}.
// left/right name the acting group factor (-1 for none).
struct Factor {
  std::vector<int> powers;
  int left = -1;
  int right = -1;
  std::string name;
};

class Layout {
 public:
  Layout(int n, std::vector<Factor> factors, int groups);

  int n() const { return n_; }
  int dim() const { return dim_; }
  int groups() const { return groups_; }
  int factor_count() const { return static_cast<int>(factors_.size()); }
  const Factor& factor(int f) const { return factors_[f]; }
  const std::vector<Factor>& factors() const { return factors_; }
  const liealg::OrthonormalBasis& basis() const { return *basis_; }
  int block_size(int f, int b) const { return binomial(n_, factors_[f].powers[b]); }
  int offset(int f, int b) const { return offsets_[f][b]; }
  // lambda^k(e_i) for the basis.
  const Mat& lam(int power, int i) const { return lam_.at(power)[i]; }

  template <class S> MatT<S> block(const VecT<S>& x, int f, int b = 0) const {
    const int m = block_size(f, b);
    MatT<S> out(m, m);
    const int o = offset(f, b);
    for (int c = 0; c < m; ++c)
      for (int r = 0; r < m; ++r) out(r, c) = x(o + c * m + r);
    return out;
  }
  template <class S> void set_block(VecT<S>& x, int f, int b, const MatT<S>& m) const {
    const int s = block_size(f, b);
    const int o = offset(f, b);
    for (int c = 0; c < s; ++c)
      for (int r = 0; r < s; ++r) x(o + c * s + r) = m(r, c);
  }
  // Point of a product of single-block factors.
  Vec pack(const std::vector<Mat>& mats) const;
  std::vector<Mat> unpack(const Vec& x) const;

 private:
  int n_;
  int groups_;
  int dim_ = 0;
  std::vector<Factor> factors_;
  std::vector<std::vector<int>> offsets_;
  std::shared_ptr<liealg::OrthonormalBasis> basis_;
  std::map<int, std::vector<Mat>> lam_;
};

// A family of vector fields indexed by the basis: sum of coef * e_i^{side}
// on a factor. e^L(A) = A lambda(e), e^R(A) = lambda(e) A.
struct Piece {
  cd coef;
  int factor;
  Side side;
};
using VecSpec = std::vector<Piece>;

// coef * sum_i u(e_i) ^ v(e_i), with u ^ v = u (x) v - v (x) u.
struct Term {
  cd coef;
  VecSpec u;
  VecSpec v;
};
using BivSpec = std::vector<Term>;

VecSpec frame(int factor, Side side, cd coef = 1.0);
VecSpec operator+(VecSpec a, const VecSpec& b);
VecSpec scaled(VecSpec a, cd c);
// Fundamental fields of group factor g (sign kActionSign).
VecSpec induced(const Layout& lay, int g);

// D x dim(g) matrix whose i-th column is the family evaluated on e_i.
template <class S> MatT<S> eval_family(const Layout& lay, const VecSpec& spec, const VecT<S>& x) {
  const int N = lay.basis().dim();
  MatT<S> out = zeros<S>(lay.dim(), N);
  for (const Piece& p : spec) {
    const Factor& f = lay.factor(p.factor);
    for (int b = 0; b < static_cast<int>(f.powers.size()); ++b) {
      MatT<S> a = lay.block<S>(x, p.factor, b);
      const int m = lay.block_size(p.factor, b);
      const int o = lay.offset(p.factor, b);
      for (int i = 0; i < N; ++i) {
        MatT<S> le = lift<S>(lay.lam(f.powers[b], i));
        MatT<S> v = (p.side == Side::L) ? MatT<S>(a * le) : MatT<S>(le * a);
        for (int c = 0; c < m; ++c)
          for (int r = 0; r < m; ++r) out(o + c * m + r, i) += v(r, c) * p.coef;
      }
    }
  }
  return out;
}

template <class S> MatT<S> eval_bivector(const Layout& lay, const BivSpec& spec, const VecT<S>& x) {
  MatT<S> out = zeros<S>(lay.dim(), lay.dim());
  for (const Term& t : spec) {
    MatT<S> u = eval_family<S>(lay, t.u, x);
    MatT<S> v = eval_family<S>(lay, t.v, x);
    MatT<S> uv = u * v.transpose();
    out += (uv - uv.transpose()) * S(t.coef);
  }
  return out;
}

// Schouten bracket [P,Q] of bivector fields given by generic callables
// (templated on the scalar), derivatives by dual numbers.
Array3 schouten_from(const Mat& P, const std::vector<Mat>& dP, const Mat& Q, const std::vector<Mat>& dQ);

template <class FP, class FQ> Array3 schouten(FP&& p, FQ&& q, const Vec& x) {
  const int d = static_cast<int>(x.size());
  Mat P = p(x), Q = q(x);
  std::vector<Mat> dP(d), dQ(d);
  for (int l = 0; l < d; ++l) {
    VecT<D1> xs = seed_axis<cd>(x, l);
    dP[l] = tangent<cd>(p(xs));
    dQ[l] = tangent<cd>(q(xs));
  }
  return schouten_from(P, dP, Q, dQ);
}

// Same bracket with derivatives by central differences of a plain evaluator.
Array3 schouten_fd(const std::function<Mat(const Vec&)>& p, const Vec& x, double h = 1e-5);

// phi_M = 1/2 C_ijk rho_i (x) rho_j (x) rho_k for a D x dim(g) field matrix.
Array3 cartan_field(const Mat& rho, const liealg::OrthonormalBasis& b);

// Exterior derivative of a 2-form field W(x) (D x D) and of a 1-form field.
template <class F> Array3 ext_d2(F&& w, const Vec& x) {
  const int d = static_cast<int>(x.size());
  std::vector<Mat> dW(d);
  for (int l = 0; l < d; ++l) dW[l] = tangent<cd>(w(seed_axis<cd>(x, l)));
  Array3 out(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) out(a, b, c) = dW[a](b, c) + dW[b](c, a) + dW[c](a, b);
  return out;
}
template <class F> Mat ext_d1(F&& alpha, const Vec& x) {
  const int d = static_cast<int>(x.size());
  Mat da(d, d);
  for (int l = 0; l < d; ++l) {
    VecT<D1> a = alpha(seed_axis<cd>(x, l));
    for (int j = 0; j < d; ++j) da(l, j) = a(j).d;
  }
  return da - da.transpose();
}

// Differential of a map between ambient coordinates.
template <class F> Mat differential(F&& f, const Vec& x) { return jacobian(std::forward<F>(f), x); }

}  // namespace qplab::tensorcalc
