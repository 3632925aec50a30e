#include <doctest.h>

#include "oracles.hpp"
#include "qplab/liealg.hpp"

using namespace qplab;

TEST_CASE("Killing form is 2n tr(xy) and rejects trace") {
  Rng rng(7);
  for (int n : {2, 3}) {
    Mat x = oracle::random_traceless(n, rng, 1.0), y = oracle::random_traceless(n, rng, 1.0);
    CHECK(std::abs(liealg::killing(x, y) - 2.0 * n * (x * y).trace()) < 1e-12);
    // Killing form equals the trace form of ad, computed here on gl(n)
    Mat ad_x(n * n, n * n), ad_y(n * n, n * n);
    for (int k = 0; k < n * n; ++k) {
      Mat e = Mat::Zero(n, n);
      e(k % n, k / n) = 1.0;
      ad_x.col(k) = oracle::flat(oracle::bracket(x, e));
      ad_y.col(k) = oracle::flat(oracle::bracket(y, e));
    }
    CHECK(std::abs(liealg::killing(x, y) - (ad_x * ad_y).trace()) < 1e-10);
    CHECK_THROWS_AS(liealg::killing(Mat::Identity(n, n), y), std::domain_error);
  }
}

TEST_CASE("orthonormal basis has dim n^2-1, is traceless, and coords invert element") {
  Rng rng(3);
  for (int n : {2, 3}) {
    auto b = liealg::orthonormal_basis(n);
    CHECK(b.dim() == n * n - 1);
    for (const Mat& e : b.e) CHECK(std::abs(e.trace()) < 1e-14);
    CHECK(max_abs(Mat(b.gram - Mat::Identity(b.dim(), b.dim()))) < 1e-12);
    Mat x = oracle::random_traceless(n, rng, 1.0);
    CHECK(max_abs(Mat(b.element<cd>(b.coords<cd>(x)) - x)) < 1e-12);
  }
}

TEST_CASE("structure constants: trace form of ad is the identity") {
  // tr(ad e_i ad e_l) = sum_jk C_jik C_klj = delta_il for an orthonormal basis
  for (int n : {2, 3}) {
    auto b = liealg::orthonormal_basis(n);
    Array3 C = liealg::structure_constants(b);
    const int N = b.dim();
    double d = 0.0;
    for (int i = 0; i < N; ++i)
      for (int l = 0; l < N; ++l) {
        cd s = 0.0;
        for (int j = 0; j < N; ++j)
          for (int k = 0; k < N; ++k) s += C(j, i, k) * C(k, l, j);
        d = std::max(d, std::abs(s - (i == l ? 1.0 : 0.0)));
      }
    CHECK(d < 1e-12);
    auto phi = liealg::cartan_trivector(b).components;
    CHECK(max_abs_diff(phi, [&] {
            Array3 h = C;
            for (auto& v : h.a) v *= 0.5;
            return h;
          }()) < 1e-14);
  }
}

TEST_CASE("parabolic block data") {
  CHECK(liealg::blocks_of({}, 3) == std::vector<int>{0, 1, 2});
  CHECK(liealg::blocks_of({1}, 3) == std::vector<int>{0, 0, 1});
  CHECK(liealg::blocks_of({2}, 3) == std::vector<int>{0, 1, 1});
  CHECK(liealg::blocks_of({1, 2}, 3) == std::vector<int>{0, 0, 0});
  CHECK(liealg::complement({1}, 3) == liealg::Subset{2});
  CHECK(liealg::full_subset(3) == liealg::Subset{1, 2});

  // frozen dimensions for sl(3), I = {1}: blocks (2, 1)
  auto P = liealg::parabolic({1}, 3);
  CHECK(P.u.size() == 2);
  CHECK(P.um.size() == 2);
  CHECK(P.levi.size() == 4);
  CHECK(P.block_sizes == std::vector<int>{2, 1});

  Mat upper(3, 3);
  upper << 1, 2, 3, 4, 5, 6, 0, 0, -6;
  CHECK(P.lower_residual(upper) == 0.0);
  CHECK(P.upper_residual(upper) > 0.0);
  Mat lp = P.levi_part(upper);
  CHECK(lp(0, 2) == cd(0.0));
  CHECK(lp(1, 0) == cd(4.0));
}

TEST_CASE("root datum for sl(3)") {
  auto r = liealg::root_datum(3);
  CHECK(r.l == 2);
  CHECK(r.coxeter_word == std::vector<int>{1, 2});
  CHECK(std::abs(r.coxeter_rep.determinant() - 1.0) < 1e-14);
  // <alpha_i, coweight_j> = delta_ij
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cd pair = 0.0;
      for (int k = 0; k < 3; ++k) pair += r.simple_roots[i](k) * r.fundamental_coweights[j](k, k);
      CHECK(std::abs(pair - (i == j ? 1.0 : 0.0)) < 1e-14);
    }
}
