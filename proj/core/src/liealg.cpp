#include "qplab/liealg.hpp"

#include <cmath>
#include <stdexcept>

namespace qplab::liealg {

namespace {

Mat unit(int n, int i, int j) {
  Mat m = Mat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

void require_traceless(const Mat& x) {
  if (x.rows() != x.cols()) throw std::domain_error("killing: non-square input");
  double scale = 1.0 + x.norm();
  if (std::abs(x.trace()) > 1e-8 * scale) throw std::domain_error("killing: input is not traceless");
}

}  // namespace

cd killing(const Mat& x, const Mat& y) {
  require_traceless(x);
  require_traceless(y);
  if (x.rows() != y.rows()) throw std::domain_error("killing: size mismatch");
  return killing_t<cd>(x, y);
}

OrthonormalBasis orthonormal_basis(int n) {
  if (n < 2) throw std::domain_error("orthonormal_basis: n must be at least 2");
  OrthonormalBasis b;
  b.n = n;
  const double s = 1.0 / std::sqrt(4.0 * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      b.e.push_back((unit(n, i, j) + unit(n, j, i)) * s);
      b.e.push_back((unit(n, i, j) - unit(n, j, i)) * (I_unit * s));
    }
  // Gram-Schmidt over H_k = E_kk - E_{k+1,k+1}; the form is real and
  // positive on real diagonal matrices.
  std::vector<Mat> cartan;
  for (int k = 0; k + 1 < n; ++k) {
    Mat h = unit(n, k, k) - unit(n, k + 1, k + 1);
    for (const Mat& c : cartan) h -= c * killing_t<cd>(c, h);
    h /= std::sqrt(killing_t<cd>(h, h));
    cartan.push_back(h);
  }
  b.e.insert(b.e.end(), cartan.begin(), cartan.end());
  const int d = b.dim();
  b.gram.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b.gram(i, j) = killing_t<cd>(b.e[i], b.e[j]);
  return b;
}

Array3 structure_constants(const OrthonormalBasis& b) {
  const int d = b.dim();
  if ((b.gram - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("structure_constants: basis is not orthonormal");
  Array3 c(d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      Mat br = commutator<cd>(b.e[j], b.e[k]);
      for (int i = 0; i < d; ++i) c(i, j, k) = killing_t<cd>(b.e[i], br);
    }
  return c;
}

CartanTrivector cartan_trivector(const OrthonormalBasis& b) {
  Array3 c = structure_constants(b);
  for (cd& x : c.a) x *= 0.5;
  return {c};
}

RootDatum root_datum(int n) {
  RootDatum r;
  r.n = n;
  r.l = n - 1;
  for (int i = 0; i < r.l; ++i) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    a(i) = 1.0;
    a(i + 1) = -1.0;
    r.simple_roots.push_back(a);
    Mat w = Mat::Zero(n, n);
    for (int j = 0; j <= i; ++j) w(j, j) = 1.0;
    w -= Mat::Identity(n, n) * (static_cast<double>(i + 1) / n);
    r.fundamental_coweights.push_back(w);
    r.coxeter_word.push_back(i + 1);
  }
  r.coxeter_rep = Mat::Identity(n, n);
  for (int i = 0; i < r.l; ++i) {
    Mat s = Mat::Identity(n, n);
    s(i, i) = 0.0;
    s(i + 1, i + 1) = 0.0;
    s(i, i + 1) = -1.0;
    s(i + 1, i) = 1.0;
    r.coxeter_rep = r.coxeter_rep * s;
  }
  return r;
}

std::vector<int> blocks_of(const Subset& I, int n) {
  for (int i : I)
    if (i < 1 || i > n - 1) throw std::domain_error("parabolic: index out of range");
  std::vector<int> block(n, 0);
  for (int r = 1; r < n; ++r) {
    bool joined = false;
    for (int i : I)
      if (i == r) joined = true;
    block[r] = block[r - 1] + (joined ? 0 : 1);
  }
  return block;
}

Subset full_subset(int n) {
  Subset s;
  for (int i = 1; i < n; ++i) s.push_back(i);
  return s;
}

Subset complement(const Subset& I, int n) {
  Subset s;
  for (int i = 1; i < n; ++i) {
    bool in = false;
    for (int j : I) in = in || (j == i);
    if (!in) s.push_back(i);
  }
  return s;
}

double ParabolicData::lower_residual(const Mat& x) const {
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (block_of[i] > block_of[j]) r = std::max(r, std::abs(x(i, j)));
  return r;
}

double ParabolicData::upper_residual(const Mat& x) const {
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (block_of[i] < block_of[j]) r = std::max(r, std::abs(x(i, j)));
  return r;
}

Mat ParabolicData::levi_part(const Mat& x) const { return levi_part_t<cd>(x); }

ParabolicData parabolic(const Subset& I, int n) {
  ParabolicData p;
  p.n = n;
  p.I = I;
  p.block_of = blocks_of(I, n);
  p.block_sizes.assign(p.block_of.back() + 1, 0);
  for (int b : p.block_of) p.block_sizes[b]++;
  std::vector<Mat> cartan;
  for (int k = 0; k + 1 < n; ++k) cartan.push_back(unit(n, k, k) - unit(n, k + 1, k + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Mat e = unit(n, i, j);
      int bi = p.block_of[i], bj = p.block_of[j];
      if (bi <= bj) p.p.push_back(e);
      if (bi >= bj) p.pm.push_back(e);
      if (bi < bj) p.u.push_back(e);
      if (bi > bj) p.um.push_back(e);
      if (bi == bj) p.levi.push_back(e);
    }
  for (const Mat& h : cartan) {
    p.p.push_back(h);
    p.pm.push_back(h);
    p.levi.push_back(h);
  }
  // Centre of the Levi: block-scalar traceless diagonals.
  const int nb = p.blocks();
  for (int b = 0; b + 1 < nb; ++b) {
    Mat z = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      if (p.block_of[i] == b) z(i, i) = 1.0 / p.block_sizes[b];
      if (p.block_of[i] == b + 1) z(i, i) = -1.0 / p.block_sizes[b + 1];
    }
    p.levi_center.push_back(z);
  }
  return p;
}

WeightBasis weight_basis(int n) {
  WeightBasis w;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      w.E.push_back(unit(n, i, j));
      Eigen::VectorXd wt = Eigen::VectorXd::Zero(n);
      wt(i) += 1.0;
      wt(j) -= 1.0;
      w.weights.push_back(wt);
      w.dual.push_back(unit(n, j, i));
    }
  for (int k = 0; k + 1 < n; ++k) {
    w.E.push_back(unit(n, k, k) - unit(n, k + 1, k + 1));
    w.weights.push_back(Eigen::VectorXd::Zero(n));
    Mat d = Mat::Zero(n, n);
    for (int j = 0; j <= k; ++j) d(j, j) = 1.0;
    w.dual.push_back(d);
  }
  return w;
}

}  // namespace qplab::liealg
