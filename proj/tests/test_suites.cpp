#include <doctest.h>

#include <cmath>

#include "qplab/suites.hpp"

using namespace qplab;

TEST_CASE("sample streams do not depend on the thread count") {
  suites::Config a, b;
  a.threads = 1;
  b.threads = 4;
  auto f = [](Rng& rng, int i) { return std::vector<double>{rng.uniform() + i, rng.normal()}; };
  auto sa = suites::run_sampled(a, "x", 17, 2, f), sb = suites::run_sampled(b, "x", 17, 2, f);
  CHECK(sa.defects == sb.defects);
  auto sc = suites::run_sampled(a, "y", 17, 2, f);
  CHECK(sa.defects != sc.defects);
}

TEST_CASE("throwing samples become NaN with the first error kept") {
  suites::Config cfg;
  cfg.threads = 3;
  auto s = suites::run_sampled(cfg, "t", 6, 1, [](Rng&, int i) -> std::vector<double> {
    if (i % 2) throw std::runtime_error("odd");
    return {0.0};
  });
  CHECK(std::isnan(s.defects[0][1]));
  CHECK(s.defects[0][0] == 0.0);
  CHECK(s.first_error == "point 1: odd");
}

TEST_CASE("suite registry") {
  CHECK(suites::suite_names().size() == 9);
  suites::Config cfg;
  cfg.samples = 2;
  CHECK_THROWS_AS(suites::run_suite("nope", cfg), std::invalid_argument);
  cfg.n = 4;
  CHECK_THROWS_AS(suites::run_suite("liealg", cfg), std::invalid_argument);
  cfg.n = 2;
  auto r = suites::run_suite("liealg", cfg);
  CHECK(r.records.size() == 5);
  for (const auto& rec : r.records) CHECK(rec.pass);
}
