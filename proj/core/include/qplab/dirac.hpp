#pragma once

#include <functional>
#include <stdexcept>

#include "qplab/linalg.hpp"

namespace qplab::dirac {

// Raised when a construction that should be Lagrangian is not; signals a
// sign or normalization mismatch between the inputs.
struct ConventionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TransversalityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A subspace of V + V*, columns (X; alpha) of an orthonormal spanning matrix.
struct LinearDirac {
  int d = 0;
  Mat span;  // 2d x k

  Mat vectors() const { return span.topRows(d); }
  Mat covectors() const { return span.bottomRows(d); }
  int dim() const { return static_cast<int>(span.cols()); }
  // max |beta(X) + alpha(Y)| over the orthonormal span.
  double pairing_defect() const;
  bool is_lagrangian(double tol = 1e-8) const { return dim() == d && pairing_defect() <= tol; }
  // L is the graph of a bivector iff L meets V trivially.
  bool is_graph(double rel = kRankTol) const;
  Mat to_bivector() const;
};

// Column space of a (X; alpha) spanning set; no Lagrangian check.
LinearDirac from_span(const Mat& s, double rel = kRankTol);

// {(P alpha, alpha)}: pi#(alpha) = pi(., alpha).
LinearDirac graph_of_bivector(const Mat& P);
// {(X, iota_X w)}.
LinearDirac graph_of_form(const Mat& W);

// span{(P a + R xi, Cstar a + S xi)}; throws ConventionError unless Lagrangian.
LinearDirac qp_dirac(const Mat& P, const Mat& R, const Mat& Cstar, const Mat& S, double tol = 1e-8);

// {(X, j^T beta) : (j X, beta) in L} for an injection j (d x k).
LinearDirac backward_image(const LinearDirac& L, const Mat& j, double rel = kRankTol);
// {(f X, beta) : (X, f^T beta) in L} for a surjection f (k x d).
LinearDirac forward_image(const LinearDirac& L, const Mat& f, double rel = kRankTol);

// Strongness: no nonzero X with (X, 0) in L and dPhi X = 0.
bool is_strong(const LinearDirac& L, const Mat& dPhi, double rel = kRankTol);

// Twisted Courant bracket of two sections, distance of the result to L at the
// point. A section maps x (with dual entries) to the stacked (X; alpha).
using Section = std::function<VecT<D1>(const VecT<D1>&)>;
// Sign in front of iota_{X^Y} phi in the bracket. Closure of the
// quasi-Poisson Dirac structures only holds with -1 against phi = -Phi^* eta.
inline constexpr double kTwistSign = -1.0;
double courant_defect(const Section& s1, const Section& s2, const Vec& x, const Array3& phi, const LinearDirac& L,
                      double twist = kTwistSign);

}  // namespace qplab::dirac
