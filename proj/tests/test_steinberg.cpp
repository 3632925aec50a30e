#include <doctest.h>

#include "oracles.hpp"
#include "qplab/steinberg.hpp"

using namespace qplab;

TEST_CASE("cross-section is transversal to conjugacy classes") {
  Rng rng(131);
  for (int n : {2, 3}) {
    auto b = liealg::orthonormal_basis(n);
    auto tr = steinberg::transversality_check(rng.complex_vector(n - 1), b);
    CHECK(tr.ok());
    CHECK(tr.slice_rank == n - 1);
    CHECK(tr.class_rank == n * n - 1 - (n - 1));
  }
}

TEST_CASE("conjugation into the cross-section") {
  Rng rng(137);
  for (int n : {2, 3}) {
    Mat h = oracle::random_sl(n, rng, 1.0);
    Mat g = steinberg::conj_to_sigma(h);
    CHECK(std::abs(g.determinant() - 1.0) < 1e-10);
    Mat s = steinberg::sigma_point<cd>(n, group::chevalley<cd>(h));
    CHECK(max_abs(Mat(g * h * g.inverse() - s)) < 1e-9);
  }
}

TEST_CASE("centralizer samples commute") {
  Rng rng(139);
  auto b = liealg::orthonormal_basis(3);
  Mat h = steinberg::sigma_point<cd>(3, rng.complex_vector(2));
  auto zs = steinberg::centralizer_fiber_sample(h, 4, rng, b);
  REQUIRE(zs.size() == 4);
  CHECK(max_abs(Mat(zs[0] - Mat::Identity(3, 3))) < 1e-14);
  for (const Mat& z : zs) CHECK(max_abs(Mat(z * h - h * z)) < 1e-10);
}

TEST_CASE("universal centralizer chart") {
  Rng rng(149);
  for (int n : {2, 3}) {
    steinberg::ZChart chart(n);
    auto s = steinberg::sample_z(chart, rng);
    // coordinates round trip
    Mat x = Mat::Zero(n, n), h = steinberg::sigma_point<cd>(n, Vec(s.y.head(n - 1))), hk = Mat::Identity(n, n);
    for (int k = 0; k < n - 1; ++k) {
      hk = hk * h;
      x += (hk - Mat::Identity(n, n) * (hk.trace() / double(n))) * s.y(n - 1 + k);
    }
    Vec back = chart.coords_of(s.y.head(n - 1), x);
    CHECK((back - s.y).norm() < 1e-8);
    CHECK(max_abs(Mat(s.a - oracle::expm(x))) < 1e-9);

    auto r = steinberg::z_check(chart, s.y);
    CHECK(r.graph);
    CHECK(r.rank == 2 * (n - 1));
    CHECK(r.jacobi < 1e-6);
    CHECK(r.inverse_defect < 1e-6);
    CHECK(r.closed_defect < 1e-6);
    CHECK(r.toda < 1e-8);
    CHECK(r.membership < 1e-10);
  }
}

TEST_CASE("Toda brackets on the SL(3) universal centralizer") {
  Rng rng(151);
  steinberg::ZChart chart(3);
  std::vector<Vec> ys;
  for (int k = 0; k < 3; ++k) ys.push_back(steinberg::sample_z(chart, rng).y);
  CHECK(steinberg::toda_commute_check(chart, ys) < 1e-8);
}

TEST_CASE("two routes to the universal centralizer and the reduction") {
  Rng rng(157);
  for (int n : {2, 3}) {
    CHECK(steinberg::two_route_defect(n, oracle::random_sl(n, rng), rng.complex_vector(n - 1)) < 1e-6);
    steinberg::ZChart chart(n);
    auto s = steinberg::sample_z(chart, rng);
    auto red = qp::reduction_check(chart.space(), chart.point(s.y),
                                   {steinberg::Target::Sigma, steinberg::Target::InverseSigma});
    CHECK(red.j_defect < 1e-9);
    CHECK(red.bivector_defect < 1e-6);
  }
}
