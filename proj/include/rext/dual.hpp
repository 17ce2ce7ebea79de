#pragma once

#include <cmath>
#include <type_traits>

#include <Eigen/Core>

namespace rext {

/// Forward-mode dual number: value + derivative along one seeded direction.
///
/// Nesting Dual<Dual<double>> carries two independent infinitesimals, which
/// gives exact mixed second derivatives. Comparisons look only at the value.
template <typename T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value), d(0.0) {}  // NOLINT: implicit lift
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1.0) / b.v;
    return {a.v * inv, (a.d * b.v - a.v * b.d) * inv * inv};
  }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator+(const Dual& a) { return a; }

  friend Dual operator+(Dual a, double b) { a.v += b; return a; }
  friend Dual operator+(double a, Dual b) { b.v += a; return b; }
  friend Dual operator-(Dual a, double b) { a.v -= b; return a; }
  friend Dual operator-(double a, const Dual& b) { return {a - b.v, -b.d}; }
  friend Dual operator*(const Dual& a, double b) { return {a.v * b, a.d * b}; }
  friend Dual operator*(double a, const Dual& b) { return {a * b.v, a * b.d}; }
  friend Dual operator/(const Dual& a, double b) { return {a.v / b, a.d / b}; }
  friend Dual operator/(double a, const Dual& b) { return Dual(a) / b; }

  friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
  friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v && a.d == b.d; }
  friend bool operator!=(const Dual& a, const Dual& b) { return !(a == b); }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

/// Nesting depth of a scalar type: 0 for double, 1 for Dual<double>, ...
template <typename S>
struct dual_depth : std::integral_constant<int, 0> {};
template <typename T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};
template <typename S>
inline constexpr int dual_depth_v = dual_depth<S>::value;

inline double value_of(double x) { return x; }
template <typename T>
double value_of(const Dual<T>& x) { return value_of(x.v); }

template <typename T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.v), x.d * cos(x.v)};
}
template <typename T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.v), -(x.d * sin(x.v))};
}
template <typename T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T r = sqrt(x.v);
  return {r, x.d / (2.0 * r)};
}
template <typename T>
Dual<T> abs(const Dual<T>& x) {
  return value_of(x) < 0.0 ? -x : x;
}
template <typename T>
bool isfinite(const Dual<T>& x) {
  using std::isfinite;
  return isfinite(x.v) && isfinite(x.d);
}

/// Integer power by repeated multiplication; exact for polynomial terms.
template <typename S>
S ipow(const S& x, int n) {
  S r(1.0);
  for (int i = 0; i < n; ++i) r = r * x;
  return r;
}

/// Lift a double to a variable of depth one with unit seed.
inline D1 variable(double x) { return {x, 1.0}; }

}  // namespace rext

namespace Eigen {

template <typename T>
struct NumTraits<rext::Dual<T>> : NumTraits<double> {
  using Real = rext::Dual<T>;
  using NonInteger = rext::Dual<T>;
  using Nested = rext::Dual<T>;
  using Literal = rext::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2 * NumTraits<T>::ReadCost,
    AddCost = 2 * NumTraits<T>::AddCost,
    MulCost = 3 * NumTraits<T>::MulCost
  };
};

}  // namespace Eigen
