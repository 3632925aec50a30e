#pragma once

#include <complex>
#include <type_traits>

#include <Eigen/Core>

namespace qplab {

// Forward-mode dual number over a (possibly dual) base field. Nesting
// Dual<Dual<T>> gives mixed second derivatives.
template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(const T& value, const T& deriv) : v(value), d(deriv) {}
  template <class U, std::enable_if_t<std::is_constructible_v<T, const U&>, int> = 0>
  Dual(const U& value) : v(value), d(0.0) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    T inv = T(1.0) / o.v;
    d = (d * o.v - v * o.d) * inv * inv;
    v *= inv;
    return *this;
  }
};

template <class T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return Dual<T>(-a.v, -a.d); }
template <class T> Dual<T> operator+(const Dual<T>& a) { return a; }
template <class T> bool operator==(const Dual<T>& a, const Dual<T>& b) { return a.v == b.v && a.d == b.d; }
template <class T> bool operator!=(const Dual<T>& a, const Dual<T>& b) { return !(a == b); }

using cd = std::complex<double>;

// Mixed arithmetic with plain scalars.
template <class T> Dual<T> operator*(const Dual<T>& a, const cd& b) { return Dual<T>(a.v * b, a.d * b); }
template <class T> Dual<T> operator*(const cd& b, const Dual<T>& a) { return Dual<T>(a.v * b, a.d * b); }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return Dual<T>(a.v * b, a.d * b); }
template <class T> Dual<T> operator*(double b, const Dual<T>& a) { return Dual<T>(a.v * b, a.d * b); }
template <class T> Dual<T> operator+(const Dual<T>& a, const cd& b) { return Dual<T>(a.v + b, a.d); }
template <class T> Dual<T> operator+(const cd& b, const Dual<T>& a) { return Dual<T>(a.v + b, a.d); }
template <class T> Dual<T> operator-(const Dual<T>& a, const cd& b) { return Dual<T>(a.v - b, a.d); }
template <class T> Dual<T> operator-(const cd& b, const Dual<T>& a) { return Dual<T>(b - a.v, -a.d); }
template <class T> Dual<T> operator/(const Dual<T>& a, const cd& b) { return Dual<T>(a.v / b, a.d / b); }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return Dual<T>(a.v / b, a.d / b); }

using D1 = Dual<cd>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

// Primal value, stripping every dual layer.
inline cd value(const cd& x) { return x; }
template <class T> cd value(const Dual<T>& x) { return value(x.v); }

inline double mag(const cd& x) { return std::abs(x); }
template <class T> double mag(const Dual<T>& x) { return std::abs(value(x)); }

template <class T> Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T s = sqrt(x.v);
  return Dual<T>(s, x.d / (T(2.0) * s));
}
template <class T> Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.v);
  return Dual<T>(e, e * x.d);
}
template <class T> Dual<T> log(const Dual<T>& x) {
  using std::log;
  return Dual<T>(log(x.v), x.d / x.v);
}

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

}  // namespace qplab

namespace Eigen {
template <class T>
struct NumTraits<qplab::Dual<T>> : GenericNumTraits<qplab::Dual<T>> {
  using Real = qplab::Dual<T>;
  using NonInteger = qplab::Dual<T>;
  using Nested = qplab::Dual<T>;
  using Literal = qplab::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2 * NumTraits<T>::ReadCost,
    AddCost = 2 * NumTraits<T>::AddCost,
    MulCost = 3 * NumTraits<T>::MulCost
  };
  static inline Real epsilon() { return Real(1e-15); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return 15; }
};
}  // namespace Eigen
