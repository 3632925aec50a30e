#include <doctest.h>

#include "oracles.hpp"
#include "qplab/group.hpp"
#include "qplab/section.hpp"

using namespace qplab;

TEST_CASE("expm agrees with a plain Taylor sum") {
  Rng rng(11);
  for (int n : {2, 3}) {
    Mat x = oracle::random_traceless(n, rng, 2.0);
    CHECK(max_abs(Mat(expm<cd>(x) - oracle::expm(x))) < 1e-10);
    Mat nil = Mat::Zero(n, n);
    nil(0, n - 1) = 2.5;
    CHECK(max_abs(Mat(group::group_exp(Mat::Identity(n, n), nil) - (Mat::Identity(n, n) + nil))) < 1e-14);
  }
}

TEST_CASE("inverse and determinant match Eigen") {
  Rng rng(5);
  Mat a(4, 4);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = rng.complex_normal();
  CHECK(max_abs(Mat(inverse<cd>(a) - a.inverse())) < 1e-10);
  CHECK(std::abs(determinant<cd>(a) - a.determinant()) < 1e-10);
  CHECK_THROWS_AS(inverse<cd>(Mat(Mat::Zero(2, 2))), std::domain_error);
}

TEST_CASE("Chevalley coordinates are elementary symmetric functions of eigenvalues") {
  Rng rng(17);
  for (int n : {2, 3}) {
    Mat h = oracle::random_sl(n, rng, 1.0);
    Eigen::ComplexEigenSolver<Mat> es(h);
    Vec lam = es.eigenvalues();
    Vec t = group::chevalley<cd>(h);
    cd e1 = lam.sum();
    CHECK(std::abs(t(0) - e1) < 1e-10);
    if (n == 3) CHECK(std::abs(t(1) - (lam(0) * lam(1) + lam(0) * lam(2) + lam(1) * lam(2))) < 1e-10);
  }
}

TEST_CASE("sigma(t) has the signed characteristic polynomial and lies in SL(n)") {
  Rng rng(23);
  for (int n : {2, 3}) {
    Vec t = rng.complex_vector(n - 1);
    Mat s = steinberg::sigma_point<cd>(n, t);
    CHECK(std::abs(s.determinant() - 1.0) < 1e-12);
    CHECK(max_abs(Mat(group::chevalley<cd>(s) - t)) < 1e-12);
    // eigenvector (lambda^{n-1}, ..., 1)
    Eigen::ComplexEigenSolver<Mat> es(s);
    for (int j = 0; j < n; ++j) {
      cd lam = es.eigenvalues()(j);
      Vec v(n);
      for (int i = 0; i < n; ++i) v(i) = std::pow(lam, n - 1 - i);
      CHECK((s * v - lam * v).norm() < 1e-9 * (1.0 + v.norm()));
    }
  }
  // frozen: n = 2, t = 3 gives [[3, -1], [1, 0]]
  Vec t(1);
  t << 3.0;
  Mat want(2, 2);
  want << 3.0, -1.0, 1.0, 0.0;
  CHECK(max_abs(Mat(steinberg::sigma_point<cd>(2, t) - want)) == 0.0);
}

TEST_CASE("ad_matrix is Ad_g in coordinates; centralizer of a regular element has dim l") {
  Rng rng(29);
  for (int n : {2, 3}) {
    auto b = liealg::orthonormal_basis(n);
    Mat g = oracle::random_sl(n, rng);
    Mat A = group::ad_matrix(g, b);
    Mat x = oracle::random_traceless(n, rng, 1.0);
    Vec want = b.coords<cd>(Mat(g * x * g.inverse()));
    CHECK((A * b.coords<cd>(x) - want).norm() < 1e-10);

    Vec t = rng.complex_vector(n - 1);
    Mat s = steinberg::sigma_point<cd>(n, t);
    CHECK(group::centralizer_algebra(s, b).cols() == n - 1);
    CHECK(group::is_regular(s, b));
    CHECK_FALSE(group::is_regular(Mat(Mat::Identity(n, n)), b));
  }
}

TEST_CASE("determinant normalisation and projective distance") {
  Rng rng(31);
  Mat g = oracle::random_sl(3, rng);
  cd c(1.5, -0.7);
  CHECK(std::abs(group::det_normalize(Mat(c * g)).determinant() - 1.0) < 1e-12);
  CHECK(group::projective_distance(Mat(c * g), g) < 1e-12);
  CHECK(group::projective_distance(Mat(g * g), g) > 1e-3);
}

TEST_CASE("Maurer-Cartan forms and eta") {
  Rng rng(37);
  Mat h = oracle::random_sl(2, rng);
  Mat v = oracle::random_traceless(2, rng, 1.0);
  CHECK(max_abs(Mat(group::maurer_cartan(group::Side::L, h, v) - h.inverse() * v)) < 1e-12);
  CHECK(max_abs(Mat(group::maurer_cartan(group::Side::R, h, v) - v * h.inverse())) < 1e-12);
  // eta is totally skew
  Mat u = h * oracle::random_traceless(2, rng, 1.0), w = h * oracle::random_traceless(2, rng, 1.0);
  Mat vv = h * v;
  cd e1 = group::eta(h, u, vv, w), e2 = group::eta(h, vv, u, w);
  CHECK(std::abs(e1 + e2) < 1e-12);
  // left and right versions agree by Ad invariance
  CHECK(std::abs(e1 - group::eta(h, u, vv, w, group::Side::R)) < 1e-12);
}
