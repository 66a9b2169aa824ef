#pragma once

// Forward-mode automatic differentiation scalars.
//
// Dual<N> carries a value and N directional derivatives. HyperDual carries a
// value, two first-order parts (eps1, eps2) and the eps1*eps2 cross term, so a
// single pass recovers second directional derivatives. Both are usable as
// Eigen scalars.

#include <Eigen/Core>

#include <cmath>

namespace smoothsafe {

template <int N>
struct Dual {
  using Grad = Eigen::Matrix<double, N, 1>;

  double v = 0.0;
  Grad d = Grad::Zero();

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit on purpose, constants promote
  Dual(double value, const Grad& grad) : v(value), d(grad) {}

  static Dual variable(double value, int index) {
    Dual x(value);
    x.d[index] = 1.0;
    return x;
  }

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    d = (d - (v * inv) * o.d) * inv;
    v *= inv;
    return *this;
  }
};

template <int N> Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N> Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N> Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <int N> Dual<N> operator/(Dual<N> a, const Dual<N>& b) { return a /= b; }
template <int N> Dual<N> operator+(Dual<N> a, double b) { a.v += b; return a; }
template <int N> Dual<N> operator+(double a, Dual<N> b) { b.v += a; return b; }
template <int N> Dual<N> operator-(Dual<N> a, double b) { a.v -= b; return a; }
template <int N> Dual<N> operator-(double a, const Dual<N>& b) { return Dual<N>(a - b.v, -b.d); }
template <int N> Dual<N> operator*(Dual<N> a, double b) { a.v *= b; a.d *= b; return a; }
template <int N> Dual<N> operator*(double a, Dual<N> b) { b.v *= a; b.d *= a; return b; }
template <int N> Dual<N> operator/(Dual<N> a, double b) { a.v /= b; a.d /= b; return a; }
template <int N> Dual<N> operator/(double a, const Dual<N>& b) {
  const double inv = 1.0 / b.v;
  return Dual<N>(a * inv, (-a * inv * inv) * b.d);
}
template <int N> Dual<N> operator-(const Dual<N>& a) { return Dual<N>(-a.v, -a.d); }
template <int N> Dual<N> operator+(const Dual<N>& a) { return a; }

#define SMOOTHSAFE_DUAL_COMPARE(op)                                                   \
  template <int N> bool operator op(const Dual<N>& a, const Dual<N>& b) { return a.v op b.v; } \
  template <int N> bool operator op(const Dual<N>& a, double b) { return a.v op b; }          \
  template <int N> bool operator op(double a, const Dual<N>& b) { return a op b.v; }
SMOOTHSAFE_DUAL_COMPARE(<)
SMOOTHSAFE_DUAL_COMPARE(<=)
SMOOTHSAFE_DUAL_COMPARE(>)
SMOOTHSAFE_DUAL_COMPARE(>=)
SMOOTHSAFE_DUAL_COMPARE(==)
SMOOTHSAFE_DUAL_COMPARE(!=)
#undef SMOOTHSAFE_DUAL_COMPARE

// Chain rule for a unary map with value fx and slope dfx at a.v.
template <int N>
Dual<N> chain(const Dual<N>& a, double fx, double dfx) {
  return Dual<N>(fx, dfx * a.d);
}

template <int N> Dual<N> sqrt(const Dual<N>& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s);
}
template <int N> Dual<N> sin(const Dual<N>& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
template <int N> Dual<N> cos(const Dual<N>& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
template <int N> Dual<N> atan(const Dual<N>& a) {
  return chain(a, std::atan(a.v), 1.0 / (1.0 + a.v * a.v));
}
template <int N> Dual<N> abs(const Dual<N>& a) { return a.v < 0.0 ? -a : a; }
template <int N> Dual<N> atan2(const Dual<N>& y, const Dual<N>& x) {
  const double r2 = x.v * x.v + y.v * y.v;
  return Dual<N>(std::atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2);
}

// Value with two infinitesimal directions: v + d1*e1 + d2*e2 + d12*e1*e2.
struct HyperDual {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d12 = 0.0;

  HyperDual() = default;
  HyperDual(double value) : v(value) {}  // NOLINT
  HyperDual(double value, double e1, double e2, double e12)
      : v(value), d1(e1), d2(e2), d12(e12) {}

  HyperDual& operator+=(const HyperDual& o) {
    v += o.v; d1 += o.d1; d2 += o.d2; d12 += o.d12;
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    v -= o.v; d1 -= o.d1; d2 -= o.d2; d12 -= o.d12;
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o) {
    *this = HyperDual(v * o.v, d1 * o.v + v * o.d1, d2 * o.v + v * o.d2,
                      d12 * o.v + d1 * o.d2 + d2 * o.d1 + v * o.d12);
    return *this;
  }
  HyperDual& operator/=(const HyperDual& o);
};

// Chain rule through f with f(a.v)=fx, f'=df, f''=ddf.
inline HyperDual chain(const HyperDual& a, double fx, double df, double ddf) {
  return HyperDual(fx, df * a.d1, df * a.d2, df * a.d12 + ddf * a.d1 * a.d2);
}

inline HyperDual reciprocal(const HyperDual& a) {
  const double inv = 1.0 / a.v;
  return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline HyperDual& HyperDual::operator/=(const HyperDual& o) { return *this *= reciprocal(o); }

inline HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
inline HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
inline HyperDual operator*(HyperDual a, const HyperDual& b) { return a *= b; }
inline HyperDual operator/(HyperDual a, const HyperDual& b) { return a /= b; }
inline HyperDual operator+(HyperDual a, double b) { a.v += b; return a; }
inline HyperDual operator+(double a, HyperDual b) { b.v += a; return b; }
inline HyperDual operator-(HyperDual a, double b) { a.v -= b; return a; }
inline HyperDual operator-(double a, const HyperDual& b) {
  return HyperDual(a - b.v, -b.d1, -b.d2, -b.d12);
}
inline HyperDual operator*(HyperDual a, double b) {
  a.v *= b; a.d1 *= b; a.d2 *= b; a.d12 *= b;
  return a;
}
inline HyperDual operator*(double a, HyperDual b) { return b * a; }
inline HyperDual operator/(HyperDual a, double b) { return a * (1.0 / b); }
inline HyperDual operator/(double a, const HyperDual& b) { return a * reciprocal(b); }
inline HyperDual operator-(const HyperDual& a) { return HyperDual(-a.v, -a.d1, -a.d2, -a.d12); }
inline HyperDual operator+(const HyperDual& a) { return a; }

#define SMOOTHSAFE_HYPER_COMPARE(op)                                                  \
  inline bool operator op(const HyperDual& a, const HyperDual& b) { return a.v op b.v; } \
  inline bool operator op(const HyperDual& a, double b) { return a.v op b; }            \
  inline bool operator op(double a, const HyperDual& b) { return a op b.v; }
SMOOTHSAFE_HYPER_COMPARE(<)
SMOOTHSAFE_HYPER_COMPARE(<=)
SMOOTHSAFE_HYPER_COMPARE(>)
SMOOTHSAFE_HYPER_COMPARE(>=)
SMOOTHSAFE_HYPER_COMPARE(==)
SMOOTHSAFE_HYPER_COMPARE(!=)
#undef SMOOTHSAFE_HYPER_COMPARE

inline HyperDual sqrt(const HyperDual& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline HyperDual sin(const HyperDual& a) {
  const double s = std::sin(a.v);
  return chain(a, s, std::cos(a.v), -s);
}
inline HyperDual cos(const HyperDual& a) {
  const double c = std::cos(a.v);
  return chain(a, c, -std::sin(a.v), -c);
}
inline HyperDual atan(const HyperDual& a) {
  const double q = 1.0 / (1.0 + a.v * a.v);
  return chain(a, std::atan(a.v), q, -2.0 * a.v * q * q);
}
inline HyperDual abs(const HyperDual& a) { return a.v < 0.0 ? -a : a; }

// Rotate (x, y) by the primal angle so the residual angle is an atan of a
// quantity whose value is zero; the infinitesimal parts then carry through.
inline HyperDual atan2(const HyperDual& y, const HyperDual& x) {
  const double theta = std::atan2(y.v, x.v);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  HyperDual num = y * c - x * s;
  const HyperDual den = x * c + y * s;
  num.v = 0.0;
  HyperDual out = atan(num / den);
  out.v = theta;
  return out;
}

inline double value_of(double x) { return x; }
template <int N> double value_of(const Dual<N>& x) { return x.v; }
inline double value_of(const HyperDual& x) { return x.v; }

}  // namespace smoothsafe

namespace Eigen {

template <int N>
struct NumTraits<smoothsafe::Dual<N>> : NumTraits<double> {
  using Real = smoothsafe::Dual<N>;
  using NonInteger = smoothsafe::Dual<N>;
  using Nested = smoothsafe::Dual<N>;
  using Literal = smoothsafe::Dual<N>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1 + (N > 0 ? N : 4),
    AddCost = 1 + (N > 0 ? N : 4),
    MulCost = 3 + 2 * (N > 0 ? N : 4)
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return NumTraits<double>::digits10(); }
};

template <>
struct NumTraits<smoothsafe::HyperDual> : NumTraits<double> {
  using Real = smoothsafe::HyperDual;
  using NonInteger = smoothsafe::HyperDual;
  using Nested = smoothsafe::HyperDual;
  using Literal = smoothsafe::HyperDual;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 4,
    MulCost = 12
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return NumTraits<double>::digits10(); }
};

}  // namespace Eigen
