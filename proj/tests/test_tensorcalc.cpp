#include <doctest.h>

#include "oracles.hpp"
#include "qplab/tensorcalc.hpp"

using namespace qplab;

TEST_CASE("wedge powers are the minors, multiplicative") {
  Rng rng(41);
  CHECK(tensorcalc::binomial(5, 2) == 10);
  CHECK(tensorcalc::binomial(3, 0) == 1);
  CHECK(tensorcalc::k_subsets(3, 2) == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});
  for (int n : {3, 4}) {
    Mat a = oracle::random_sl(n, rng), b = oracle::random_sl(n, rng);
    for (int k = 1; k < n; ++k) {
      CHECK(max_abs(Mat(tensorcalc::wedge_power<cd>(a, k) - oracle::minors(a, k))) < 1e-12);
      // Cauchy-Binet
      Mat lhs = tensorcalc::wedge_power<cd>(Mat(a * b), k);
      Mat rhs = tensorcalc::wedge_power<cd>(a, k) * tensorcalc::wedge_power<cd>(b, k);
      CHECK(max_abs(Mat(lhs - rhs)) < 1e-10);
    }
  }
}

TEST_CASE("derived exterior representation is the derivative of wedge^k exp") {
  Rng rng(43);
  Mat x = oracle::random_traceless(3, rng, 1.0);
  for (int k = 1; k < 3; ++k) {
    const double h = 1e-5;
    Mat fd = (oracle::minors(oracle::expm(Mat(h * x)), k) - oracle::minors(oracle::expm(Mat(-h * x)), k)) / (2 * h);
    CHECK(max_abs(Mat(tensorcalc::wedge_derived(x, k) - fd)) < 1e-8);
  }
}

TEST_CASE("dual-number jacobian agrees with central differences") {
  Rng rng(47);
  Vec x = rng.complex_vector(4);
  auto f = [](const auto& v) {
    using V = std::decay_t<decltype(v)>;
    using S = typename V::Scalar;
    MatT<S> m(2, 2);
    m << v(0), v(1), v(2), v(3);
    MatT<S> e = expm<S>(m) * inverse<S>(MatT<S>(m + identity<S>(2) * S(3.0)));
    VecT<S> out(4);
    for (int i = 0; i < 4; ++i) out(i) = e(i);
    out(3) += determinant<S>(m);
    return out;
  };
  Mat J = jacobian([&](const VecT<D1>& y) { return f(y); }, x);
  Mat Jfd = oracle::fd_jacobian([&](const Vec& y) { return f(y); }, x);
  CHECK(max_abs(Mat(J - Jfd)) < 1e-7);
}

TEST_CASE("Schouten bracket: linear Poisson vanishes, generic quadratic does not") {
  // Lie-Poisson bivector on sl(2)^* in orthonormal coordinates: P_ab(x) = C_abk x_k
  auto b = liealg::orthonormal_basis(2);
  Array3 C = liealg::structure_constants(b);
  auto lp = [&](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    MatT<S> P = zeros<S>(3, 3);
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c)
        for (int k = 0; k < 3; ++k) P(a, c) += x(k) * S(C(a, c, k));
    return P;
  };
  Rng rng(53);
  Vec x = rng.complex_vector(3);
  CHECK(tensorcalc::schouten(lp, lp, x).max_abs() < 1e-12);
  CHECK(tensorcalc::schouten_fd([&](const Vec& y) { return Mat(lp(y)); }, x).max_abs() < 1e-8);

  // x1 d1^d2 + x2 d0^d1 is not Poisson in C^3: v = (x1, 0, x2) has v . curl v = -x2
  auto q = [](const auto& y) {
    using S = typename std::decay_t<decltype(y)>::Scalar;
    MatT<S> P = zeros<S>(3, 3);
    P(1, 2) = y(1);
    P(2, 1) = -P(1, 2);
    P(0, 1) = y(2);
    P(1, 0) = -P(0, 1);
    return P;
  };
  CHECK(tensorcalc::schouten(q, q, x).max_abs() > 1e-3);
  // both evaluators agree
  CHECK(max_abs_diff(tensorcalc::schouten(q, q, x), tensorcalc::schouten_fd([&](const Vec& y) { return Mat(q(y)); }, x)) <
        1e-7);
}

TEST_CASE("exterior derivative squares to zero") {
  Rng rng(59);
  Vec x = rng.complex_vector(3);
  // alpha = d f for f = x0 x1^2 + exp(x2) x0
  auto df = [](const auto& y) {
    using S = typename std::decay_t<decltype(y)>::Scalar;
    using std::exp;
    VecT<S> a(3);
    a(0) = y(1) * y(1) + exp(y(2));
    a(1) = S(2.0) * y(0) * y(1);
    a(2) = exp(y(2)) * y(0);
    return a;
  };
  CHECK(max_abs(tensorcalc::ext_d1(df, x)) < 1e-12);
}

TEST_CASE("layout packing round trip") {
  tensorcalc::Layout lay(3, {{{1}, 0, -1, "a"}, {{1}, -1, 0, "b"}}, 1);
  Rng rng(61);
  std::vector<Mat> m{oracle::random_sl(3, rng), oracle::random_sl(3, rng)};
  auto back = lay.unpack(lay.pack(m));
  CHECK(max_abs(Mat(back[0] - m[0])) == 0.0);
  CHECK(max_abs(Mat(back[1] - m[1])) == 0.0);
  CHECK(lay.dim() == 18);
}
