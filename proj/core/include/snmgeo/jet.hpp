#pragma once

#include <cmath>

namespace snmgeo {

// A scalar together with its first three derivatives with respect to a
// single underlying parameter: (v0, v1, v2, v3) = (f, f', f'', f''').
// Arithmetic propagates derivatives by the Leibniz rule; unary functions
// go through jet_compose (Faa di Bruno truncated at order 3).
//
// The raw arithmetic never throws; non-finite values propagate and are
// checked by callers (see Expr::eval_jet).
struct Jet3 {
  double v0 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;

  static constexpr Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }
  static constexpr Jet3 variable(double x) { return {x, 1.0, 0.0, 0.0}; }

  bool finite() const {
    return std::isfinite(v0) && std::isfinite(v1) && std::isfinite(v2) &&
           std::isfinite(v3);
  }
};

constexpr Jet3 operator+(const Jet3& a, const Jet3& b) {
  return {a.v0 + b.v0, a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3};
}

constexpr Jet3 operator-(const Jet3& a, const Jet3& b) {
  return {a.v0 - b.v0, a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3};
}

constexpr Jet3 operator-(const Jet3& a) { return {-a.v0, -a.v1, -a.v2, -a.v3}; }

constexpr Jet3 operator*(const Jet3& a, const Jet3& b) {
  return {a.v0 * b.v0,
          a.v1 * b.v0 + a.v0 * b.v1,
          a.v2 * b.v0 + 2.0 * a.v1 * b.v1 + a.v0 * b.v2,
          a.v3 * b.v0 + 3.0 * a.v2 * b.v1 + 3.0 * a.v1 * b.v2 + a.v0 * b.v3};
}

constexpr Jet3 operator*(double s, const Jet3& a) {
  return {s * a.v0, s * a.v1, s * a.v2, s * a.v3};
}
constexpr Jet3 operator*(const Jet3& a, double s) { return s * a; }
constexpr Jet3 operator+(const Jet3& a, double s) { return a + Jet3::constant(s); }
constexpr Jet3 operator+(double s, const Jet3& a) { return Jet3::constant(s) + a; }
constexpr Jet3 operator-(const Jet3& a, double s) { return a - Jet3::constant(s); }
constexpr Jet3 operator-(double s, const Jet3& a) { return Jet3::constant(s) - a; }

// Composition h = F o g where `outer` holds the derivatives of F evaluated
// at g.v0 and `inner` is the jet of g. Truncated chain rule:
//   h'   = F' g'
//   h''  = F' g'' + F'' g'^2
//   h''' = F' g''' + 3 F'' g' g'' + F''' g'^3
constexpr Jet3 jet_compose(const Jet3& outer, const Jet3& inner) {
  const double g1 = inner.v1, g2 = inner.v2, g3 = inner.v3;
  return {outer.v0,
          outer.v1 * g1,
          outer.v1 * g2 + outer.v2 * (g1 * g1),
          outer.v1 * g3 + 3.0 * outer.v2 * g1 * g2 + outer.v3 * (g1 * g1 * g1)};
}

// Jet of the derivative of the underlying function: (f', f'', f''', 0).
// The last slot is unknown at order 3 and set to zero; consumers that
// only need two derivative orders of f' (ambient frame fields) are safe.
constexpr Jet3 derivative_jet(const Jet3& j) { return {j.v1, j.v2, j.v3, 0.0}; }

inline Jet3 recip(const Jet3& a) {
  const double u = a.v0;
  const double iu = 1.0 / u;
  return jet_compose({iu, -iu * iu, 2.0 * iu * iu * iu, -6.0 * iu * iu * iu * iu}, a);
}

inline Jet3 operator/(const Jet3& a, const Jet3& b) { return a * recip(b); }
inline Jet3 operator/(const Jet3& a, double s) { return a * (1.0 / s); }
inline Jet3 operator/(double s, const Jet3& a) { return Jet3::constant(s) * recip(a); }

inline Jet3 exp(const Jet3& a) {
  const double e = std::exp(a.v0);
  return jet_compose({e, e, e, e}, a);
}

inline Jet3 log(const Jet3& a) {
  const double u = a.v0, iu = 1.0 / u;
  return jet_compose({std::log(u), iu, -iu * iu, 2.0 * iu * iu * iu}, a);
}

inline Jet3 sin(const Jet3& a) {
  const double s = std::sin(a.v0), c = std::cos(a.v0);
  return jet_compose({s, c, -s, -c}, a);
}

inline Jet3 cos(const Jet3& a) {
  const double s = std::sin(a.v0), c = std::cos(a.v0);
  return jet_compose({c, -s, -c, s}, a);
}

inline Jet3 tan(const Jet3& a) {
  const double t = std::tan(a.v0);
  const double s = 1.0 + t * t;  // sec^2
  return jet_compose({t, s, 2.0 * t * s, 2.0 * s * (1.0 + 3.0 * t * t)}, a);
}

inline Jet3 asin(const Jet3& a) {
  const double u = a.v0;
  const double r = 1.0 - u * u;
  const double rm12 = 1.0 / std::sqrt(r);
  const double rm32 = rm12 / r;
  const double rm52 = rm32 / r;
  return jet_compose({std::asin(u), rm12, u * rm32, (1.0 + 2.0 * u * u) * rm52}, a);
}

inline Jet3 atan(const Jet3& a) {
  const double u = a.v0;
  const double q = 1.0 + u * u, iq = 1.0 / q;
  return jet_compose(
      {std::atan(u), iq, -2.0 * u * iq * iq, (6.0 * u * u - 2.0) * iq * iq * iq}, a);
}

inline Jet3 atanh(const Jet3& a) {
  const double u = a.v0;
  const double r = 1.0 - u * u, ir = 1.0 / r;
  return jet_compose(
      {std::atanh(u), ir, 2.0 * u * ir * ir, (2.0 + 6.0 * u * u) * ir * ir * ir}, a);
}

inline Jet3 tanh(const Jet3& a) {
  const double t = std::tanh(a.v0);
  const double s = 1.0 - t * t;  // sech^2
  return jet_compose({t, s, -2.0 * t * s, 2.0 * s * (2.0 * t * t - s)}, a);
}

inline Jet3 sqrt(const Jet3& a) {
  const double u = a.v0;
  const double s = std::sqrt(u);
  return jet_compose({s, 0.5 / s, -0.25 / (s * u), 0.375 / (s * u * u)}, a);
}

// a^r for real exponent; requires a.v0 > 0 (enforced by Expr evaluation).
inline Jet3 pow(const Jet3& a, double r) {
  const double u = a.v0;
  const double f0 = std::pow(u, r);
  const double f1 = r * std::pow(u, r - 1.0);
  const double f2 = r * (r - 1.0) * std::pow(u, r - 2.0);
  const double f3 = r * (r - 1.0) * (r - 2.0) * std::pow(u, r - 3.0);
  return jet_compose({f0, f1, f2, f3}, a);
}

// Integer powers by repeated multiplication; valid for any base.
inline Jet3 pow_int(const Jet3& a, long n) {
  if (n < 0) return recip(pow_int(a, -n));
  Jet3 result = Jet3::constant(1.0);
  Jet3 base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

}  // namespace snmgeo
