#include <doctest.h>

#include "oracles.hpp"
#include "qplab/qp.hpp"

using namespace qplab;

namespace {
Vec random_point(const qp::QPSpace& m, Rng& rng) {
  std::vector<Mat> mats;
  for (int f = 0; f < m.layout.factor_count(); ++f) mats.push_back(oracle::random_sl(m.n(), rng));
  return m.layout.pack(mats);
}
}  // namespace

TEST_CASE("quasi-Poisson identity [pi, pi] = phi_M") {
  Rng rng(97);
  for (int n : {2, 3}) {
    qp::QPSpace D = qp::make_double(n), G = qp::make_pi_G(n);
    for (int k = 0; k < 3; ++k) {
      CHECK(qp::verify_qp_identity(D, random_point(D, rng)) < 1e-6);
      CHECK(qp::verify_qp_identity(G, random_point(G, rng)) < 1e-6);
      CHECK(qp::invariance_defect(D, random_point(D, rng)) < 1e-6);
    }
  }
}

TEST_CASE("the conjugation bivector vanishes at the identity") {
  qp::QPSpace G = qp::make_pi_G(3);
  Vec x = G.layout.pack({Mat::Identity(3, 3)});
  CHECK(max_abs(qp::point_data(G, x).P) < 1e-14);
}

TEST_CASE("moment map of the double is equivariant") {
  Rng rng(101);
  qp::QPSpace D = qp::make_double(2);
  Mat a = oracle::random_sl(2, rng), b = oracle::random_sl(2, rng);
  Mat g = oracle::random_sl(2, rng), h = oracle::random_sl(2, rng);
  auto phi = qp::moment_mats(D, D.layout.pack({a, b}));
  auto psi = qp::moment_mats(D, D.layout.pack({Mat(g * a * h.inverse()), Mat(h * b * h.inverse())}));
  REQUIRE(phi.size() == 2);
  CHECK(max_abs(Mat(psi[0] - g * phi[0] * g.inverse())) < 1e-10);
  CHECK(max_abs(Mat(psi[1] - h * phi[1] * h.inverse())) < 1e-10);
  // frozen form (a b a^{-1}, b^{-1})
  CHECK(max_abs(Mat(phi[0] - a * b * a.inverse())) < 1e-12);
  CHECK(max_abs(Mat(phi[1] - b.inverse())) < 1e-12);
}

TEST_CASE("Q1, Q2, Q3 and compatibility on D(SL2)") {
  Rng rng(103);
  qp::QPSpace D = qp::make_double(2);
  for (int k = 0; k < 3; ++k) {
    Vec x = random_point(D, rng);
    CHECK(qp::verify_Q1(D, x) < 1e-6);
    CHECK(qp::verify_Q2(D, x) < 1e-9);
    CHECK(qp::verify_Q3(D, x).ok());
    CHECK(qp::check_compat(D, x) < 1e-6);
  }
}

TEST_CASE("nondegeneracy rank is 2 dim G") {
  Rng rng(107);
  qp::QPSpace D2 = qp::make_double(2), D3 = qp::make_double(3);
  CHECK(qp::nondeg_rank(D2, random_point(D2, rng)) == 6);
  CHECK(qp::nondeg_rank(D3, random_point(D3, rng)) == 16);
}

TEST_CASE("forward Dirac and Courant closure") {
  Rng rng(109);
  qp::QPSpace D = qp::make_double(2), G = qp::make_pi_G(2);
  Vec x = random_point(D, rng);
  CHECK(qp::forward_dirac_defect(D, x) < 1e-8);
  CHECK(qp::forward_dirac_defect(G, random_point(G, rng)) < 1e-8);
  CHECK(qp::courant_probe(D, x, 3, 1) < 1e-6);
  // with the twist sign flipped the bracket leaves L_M
  CHECK(qp::courant_probe(D, x, 3, 1, -dirac::kTwistSign) > 1e-3);
}

TEST_CASE("fusion of the double with (G, pi_G)") {
  Rng rng(113);
  qp::QPSpace F = qp::fuse(qp::product(qp::make_double(2), qp::make_pi_G(2)), 0, 2);
  CHECK(F.groups() == 2);
  CHECK(qp::verify_qp_identity(F, random_point(F, rng)) < 1e-6);
}

TEST_CASE("one-sided slice G x Sigma") {
  Rng rng(127);
  for (int n : {2, 3}) {
    Mat a = oracle::random_sl(n, rng);
    Vec t = rng.complex_vector(n - 1);
    auto s = qp::make_one_sided_slice(n, a, t, steinberg::Target::Sigma);
    CHECK(s.rho_defect < 1e-8);
    CHECK(s.skew_defect < 1e-8);
    CHECK(s.P.rows() == n * n - 1 + n - 1);
  }
}
