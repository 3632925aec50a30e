#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "qplab/types.hpp"

namespace qplab {

// mt19937_64 with hand-rolled uniform and Box-Muller transforms; the standard
// distributions are implementation-defined, the engine is not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }
  // Standard complex Gaussian, E|z|^2 = 1.
  cd complex_normal() {
    double re = normal(), im = normal();
    return cd(re, im) * std::sqrt(0.5);
  }
  Vec complex_vector(int k, double scale = 1.0) {
    Vec v(k);
    for (int i = 0; i < k; ++i) v(i) = complex_normal() * scale;
    return v;
  }
  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qplab
