#include <doctest.h>

#include "oracles.hpp"
#include "qplab/wonderful.hpp"

using namespace qplab;
using namespace qplab::wonderful;

namespace {
Mat diag3(double a, double b, double c) {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}
}  // namespace

TEST_CASE("basepoints z_I for PGL(3)") {
  // top weight spaces of sum_{i not in I} coweight_i on C^3 and wedge^2 C^3
  CHECK(projective_distance(basepoint({}, 3).comps, {diag3(1, 0, 0), diag3(1, 0, 0)}) < 1e-12);
  CHECK(projective_distance(basepoint({1}, 3).comps, {diag3(1, 1, 0), diag3(1, 0, 0)}) < 1e-12);
  CHECK(projective_distance(basepoint({2}, 3).comps, {diag3(1, 0, 0), diag3(1, 1, 0)}) < 1e-12);
  CHECK(projective_distance(basepoint({1, 2}, 3).comps, {diag3(1, 1, 1), diag3(1, 1, 1)}) < 1e-12);
  CHECK(rank_signature(basepoint({}, 3)) == std::vector<int>{1, 1});
  CHECK(rank_signature(basepoint({1}, 3)) == std::vector<int>{2, 1});
  CHECK(rank_signature(basepoint({2}, 3)) == std::vector<int>{1, 2});
}

TEST_CASE("embedding is the tuple of wedge powers, equivariant") {
  Rng rng(163);
  Mat g = oracle::random_sl(3, rng), h = oracle::random_sl(3, rng);
  WonderfulPoint a = embed(g);
  CHECK(a.interior());
  CHECK(projective_distance(a.comps, {g, oracle::minors(g, 2)}) < 1e-12);
  WonderfulPoint b = act(g, h, embed(Mat::Identity(3, 3)));
  CHECK(projective_distance(b.comps, embed(Mat(g * h.inverse())).comps) < 1e-10);
  CHECK(certificate_residual(b) < 1e-10);
}

TEST_CASE("stabilizers of z_I") {
  Rng rng(167);
  for (const Subset& I : {Subset{}, Subset{1}, Subset{2}}) {
    auto [g, h] = sample_stabilizer(I, 3, rng);
    CHECK(stabilizer_membership(I, g, h));
    CHECK(stabilizer_closed_form(I, g, h));
    Mat r = oracle::random_sl(3, rng);
    CHECK_FALSE(stabilizer_membership(I, r, h));
    CHECK_FALSE(stabilizer_closed_form(I, r, h));
  }
}

TEST_CASE("action kernel dims and log fibers") {
  // dim G + l - |I|
  CHECK(action_kernel(basepoint({}, 2)).cols() == 4);
  CHECK(action_kernel(basepoint({}, 3)).cols() == 10);
  CHECK(action_kernel(basepoint({1}, 3)).cols() == 9);
  CHECK(action_kernel(basepoint({1, 2}, 3)).cols() == 8);
  for (const Subset& I : {Subset{}, Subset{1}, Subset{2}}) {
    Mat L = log_cotangent_fiber(basepoint(I, 3));
    CHECK(L.cols() == 8);
    CHECK(split_lagrangian_defect(L) < 1e-10);
    CHECK(subspace_distance(L, basepoint_fiber(I, 3)) < 1e-8);
  }
}

TEST_CASE("leaf functional: block determinant ratios of the Levi part") {
  const double p = 1.7;
  Mat x(2, 2), y(2, 2);
  x << p, 0.4, 0.0, 1.0 / p;
  y << p, 0.0, -2.0, 1.0 / p;
  LogDoublePoint q = dbar_membership(basepoint({}, 2), x, y);
  LeafValue v = leaf_functional(q);
  REQUIRE(v.values.size() == 1);
  CHECK(std::abs(v.values(0) - p * p) < 1e-12);
  // wrong triangularity or mismatched Levi parts are rejected
  CHECK_THROWS_AS(dbar_membership(basepoint({}, 2), y, x), MembershipError);
  Mat y2 = y;
  y2(0, 0) = 2.0;
  y2(1, 1) = 0.5;
  CHECK_THROWS_AS(dbar_membership(basepoint({}, 2), x, y2), MembershipError);
}

TEST_CASE("leaf functional is independent of the certificate and killed by [p_I, p_I]") {
  Rng rng(173);
  for (const Subset& I : {Subset{}, Subset{1}}) {
    LogDoublePoint p = sample_boundary(I, 3, rng);
    CHECK(p.residual < 1e-9);
    auto [s1, s2] = sample_stabilizer(I, 3, rng);
    LogDoublePoint q = p;
    q.a.cert.g = p.a.cert.g * s1;
    q.a.cert.h = p.a.cert.h * s2;
    q = dbar_membership(q.a, q.x, q.y);
    CHECK((leaf_functional(p).values - leaf_functional(q).values).norm() < 1e-9);
    for (const Mat& u : derived_parabolic(I, 3)) CHECK(leaf_derivative(p, u).norm() < 1e-9);
  }
}

TEST_CASE("pushforward of frame fields under F(g, h) = (g, hg, gh)") {
  // independent check of the four lines by differentiating F along one-parameter subgroups
  Rng rng(179);
  Mat g = oracle::random_sl(2, rng), h = oracle::random_sl(2, rng), e = oracle::random_traceless(2, rng, 1.0);
  const double s = 1e-6;
  auto F = [](const Mat& a, const Mat& b) { return std::vector<Mat>{a, b * a, a * b}; };
  auto diff = [&](const std::vector<Mat>& p, const std::vector<Mat>& m) {
    std::vector<Mat> out;
    for (int i = 0; i < 3; ++i) out.push_back((p[i] - m[i]) / (2 * s));
    return out;
  };
  Mat E = oracle::expm(Mat(s * e)), Ei = oracle::expm(Mat(-s * e));
  Mat adg = g * e * g.inverse(), adgi = g.inverse() * e * g;
  auto close = [](const std::vector<Mat>& a, const std::vector<Mat>& b) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, max_abs(Mat(a[i] - b[i])));
    return d;
  };
  // e^{1L}: g -> g exp(se)
  CHECK(close(diff(F(g * E, h), F(g * Ei, h)), {g * e, h * g * e, adg * g * h}) < 1e-8);
  // e^{1R}: g -> exp(se) g
  CHECK(close(diff(F(E * g, h), F(Ei * g, h)), {e * g, h * g * adgi, e * g * h}) < 1e-8);
  // e^{2L}: h -> h exp(se)
  CHECK(close(diff(F(g, h * E), F(g, h * Ei)), {Mat::Zero(2, 2), h * g * adgi, g * h * e}) < 1e-8);
  // e^{2R}: h -> exp(se) h
  CHECK(close(diff(F(g, E * h), F(g, Ei * h)), {Mat::Zero(2, 2), e * h * g, adg * g * h}) < 1e-8);

  BigbivReport r = bigbiv_check(g, h);
  for (double d : r.lines) CHECK(d < 1e-10);
  CHECK(r.assembled < 1e-8);
  CHECK(interior_tangency_defect(g, h) < 1e-8);
}

TEST_CASE("log nondegeneracy on boundary points of D-bar") {
  Rng rng(181);
  LogRankReport r = log_nondeg_rank(sample_boundary({}, 2, rng));
  CHECK(r.log_rank == 6);
  CHECK(r.fiber_parallel == 3);
  CHECK(r.tangency < 1e-9);
  LogRankReport s = log_nondeg_rank(sample_boundary({1}, 3, rng));
  CHECK(s.log_rank == 16);
  CHECK(s.tangency < 1e-9);
}

TEST_CASE("D-bar chart is tangent to itself and moment is (x, y^{-1})") {
  Rng rng(191);
  LogDoublePoint p = sample_boundary({}, 2, rng);
  DbarChart ch = DbarChart::at(p);
  CHECK(ch.boundary() == std::vector<int>{0});
  Mat J = jacobian([&](const VecT<D1>& c) { return ch.point<D1>(c); }, ch.center());
  CHECK(ch.tangency_residual(J) < 1e-9);
  auto [x, yi] = bar_moment(p);
  CHECK(max_abs(Mat(x - p.x)) < 1e-12);
  CHECK(max_abs(Mat(yi - p.y.inverse())) < 1e-10);
}

TEST_CASE("normalized torus blocks") {
  Vec w(2);
  w << 0.3, -1.2;
  auto T1 = torus_block<cd>(w, 3, 1), T2 = torus_block<cd>(w, 3, 2);
  Vec d1(3), d2(3);
  d1 << 1.0, w(0), w(0) * w(1);
  d2 << 1.0, w(1), w(0) * w(1);
  CHECK((T1.diagonal() - d1).norm() < 1e-15);
  CHECK((T2.diagonal() - d2).norm() < 1e-15);
  // finite on the boundary
  Vec z = Vec::Zero(2);
  CHECK(torus_block<cd>(z, 3, 2)(0, 0) == cd(1.0));
}
