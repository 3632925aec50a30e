#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qplab/rng.hpp"

namespace qplab::suites {

struct Config {
  int n = 2;
  std::uint64_t seed = 42;
  int samples = 25;
  double tol_deriv = 1e-5;   // finite-difference and derivative identities
  double tol_rank = 1e-7;    // relative singular value cut
  double tol_member = 1e-7;  // membership and tangency residuals
  double tol_alg = 1e-6;     // closed-form identities without differences
  double tol_exact = 1e-8;   // polynomial identities
  int threads = 1;
};

struct Record {
  std::string id;
  std::string anchor;  // the formula being checked
  int points = 0;
  double max_defect = 0.0;  // NaN when a sample threw
  double threshold = 0.0;
  bool pass = false;
  std::string note;  // first error message, if any
};

struct SuiteResult {
  std::string name;
  std::vector<Record> records;
  double seconds = 0.0;
};

const std::vector<std::string>& suite_names();
// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const Config& cfg);

// Independent stream for sample i of a test; does not depend on thread count.
Rng sample_rng(std::uint64_t seed, const std::string& test, int i);

// Evaluates f at points 0..count-1 on up to cfg.threads workers. Column k of
// the result is the defect of check k; a throwing sample yields NaN in every
// column and its message in errors.
struct Sampled {
  std::vector<std::vector<double>> defects;  // [check][point]
  std::string first_error;
};
Sampled run_sampled(const Config& cfg, const std::string& test, int count, int checks,
                    const std::function<std::vector<double>(Rng&, int)>& f);

}  // namespace qplab::suites
