#include "qplab/tensorcalc.hpp"

#include <stdexcept>

namespace qplab::tensorcalc {

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  if (k > n || k < 0) return out;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Mat wedge_derived(const Mat& x, int k) {
  const int n = static_cast<int>(x.rows());
  MatT<D1> g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = D1(cd(i == j ? 1.0 : 0.0), x(i, j));
  return tangent<cd>(wedge_power<D1>(g, k));
}

Layout::Layout(int n, std::vector<Factor> factors, int groups)
    : n_(n), groups_(groups), factors_(std::move(factors)),
      basis_(std::make_shared<liealg::OrthonormalBasis>(liealg::orthonormal_basis(n))) {
  for (const Factor& f : factors_) {
    if (f.left >= groups_ || f.right >= groups_) throw std::domain_error("Layout: unknown group factor");
    std::vector<int> offs;
    for (int p : f.powers) {
      if (p < 1 || p > n_ - 1) throw std::domain_error("Layout: bad exterior power");
      offs.push_back(dim_);
      int m = binomial(n_, p);
      dim_ += m * m;
      if (!lam_.count(p)) {
        std::vector<Mat> ls;
        for (const Mat& e : basis_->e) ls.push_back(p == 1 ? e : wedge_derived(e, p));
        lam_[p] = ls;
      }
    }
    offsets_.push_back(offs);
  }
}

Vec Layout::pack(const std::vector<Mat>& mats) const {
  if (static_cast<int>(mats.size()) != factor_count()) throw std::invalid_argument("pack: factor count");
  Vec x(dim_);
  for (int f = 0; f < factor_count(); ++f) set_block<cd>(x, f, 0, mats[f]);
  return x;
}

std::vector<Mat> Layout::unpack(const Vec& x) const {
  std::vector<Mat> out;
  for (int f = 0; f < factor_count(); ++f) out.push_back(block<cd>(x, f, 0));
  return out;
}

VecSpec frame(int factor, Side side, cd coef) { return {Piece{coef, factor, side}}; }

VecSpec operator+(VecSpec a, const VecSpec& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

VecSpec scaled(VecSpec a, cd c) {
  for (Piece& p : a) p.coef *= c;
  return a;
}

VecSpec induced(const Layout& lay, int g) {
  if (g < 0 || g >= lay.groups()) throw std::domain_error("induced: unknown action");
  VecSpec out;
  for (int f = 0; f < lay.factor_count(); ++f) {
    if (lay.factor(f).left == g) out.push_back({cd(kActionSign), f, Side::R});
    if (lay.factor(f).right == g) out.push_back({cd(-kActionSign), f, Side::L});
  }
  return out;
}

Array3 schouten_from(const Mat& P, const std::vector<Mat>& dP, const Mat& Q, const std::vector<Mat>& dQ) {
  const int d = static_cast<int>(P.rows());
  Array3 out(d);
  auto half = [&](const Mat& A, const std::vector<Mat>& dB) {
    for (int l = 0; l < d; ++l) {
      const Mat& db = dB[l];
      for (int i = 0; i < d; ++i) {
        cd ali = A(l, i);
        for (int j = 0; j < d; ++j) {
          cd alj = A(l, j);
          for (int k = 0; k < d; ++k)
            out(i, j, k) += ali * db(j, k) + alj * db(k, i) + A(l, k) * db(i, j);
        }
      }
    }
  };
  half(P, dQ);
  half(Q, dP);
  return out;
}

Array3 schouten_fd(const std::function<Mat(const Vec&)>& p, const Vec& x, double h) {
  const int d = static_cast<int>(x.size());
  Mat P = p(x);
  std::vector<Mat> dP(d);
  for (int l = 0; l < d; ++l) {
    Vec xp = x, xm = x;
    xp(l) += h;
    xm(l) -= h;
    dP[l] = (p(xp) - p(xm)) / (2.0 * h);
  }
  return schouten_from(P, dP, P, dP);
}

Array3 cartan_field(const Mat& rho, const liealg::OrthonormalBasis& b) {
  Array3 C = liealg::structure_constants(b);
  const int d = static_cast<int>(rho.rows());
  const int N = b.dim();
  Array3 out(d);
  for (int i = 0; i < N; ++i) {
    Mat Ci(N, N);
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) Ci(j, k) = C(i, j, k);
    if (Ci.cwiseAbs().maxCoeff() == 0.0) continue;
    Mat M = rho * Ci * rho.transpose();
    for (int p = 0; p < d; ++p) {
      cd r = 0.5 * rho(p, i);
      if (r == 0.0) continue;
      for (int q = 0; q < d; ++q)
        for (int s = 0; s < d; ++s) out(p, q, s) += r * M(q, s);
    }
  }
  return out;
}

}  // namespace qplab::tensorcalc
