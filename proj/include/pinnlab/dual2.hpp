#pragma once

#include <cmath>

#include "pinnlab/errors.hpp"

namespace pinnlab {

/// Truncated Taylor scalar in two input variables (t, x).
///
/// Carries the value together with du/dx, du/dt and d2u/dx2. Mixed and
/// second time derivatives are not tracked: the Burgers residual only
/// needs u, u_t, u_x and u_xx.
struct Dual2 {
  double val = 0.0;
  double dx = 0.0;
  double dt = 0.0;
  double dxx = 0.0;

  friend bool operator==(const Dual2&, const Dual2&) = default;
};

enum class InputAxis { x, t };

/// Which scalar of a Dual2 a downstream expression reads.
enum class Component { val, dx, dt, dxx };

inline constexpr Dual2 lift_const(double c) { return {c, 0.0, 0.0, 0.0}; }

inline constexpr Dual2 lift_input(double v, InputAxis axis) {
  return axis == InputAxis::x ? Dual2{v, 1.0, 0.0, 0.0} : Dual2{v, 0.0, 1.0, 0.0};
}

inline constexpr double component(const Dual2& d, Component c) {
  switch (c) {
    case Component::val: return d.val;
    case Component::dx: return d.dx;
    case Component::dt: return d.dt;
    case Component::dxx: return d.dxx;
  }
  return d.val;
}

inline constexpr Dual2 operator+(const Dual2& a, const Dual2& b) {
  return {a.val + b.val, a.dx + b.dx, a.dt + b.dt, a.dxx + b.dxx};
}

inline constexpr Dual2 operator-(const Dual2& a, const Dual2& b) {
  return {a.val - b.val, a.dx - b.dx, a.dt - b.dt, a.dxx - b.dxx};
}

inline constexpr Dual2 operator-(const Dual2& a) { return {-a.val, -a.dx, -a.dt, -a.dxx}; }

inline constexpr Dual2 operator*(double c, const Dual2& a) {
  return {c * a.val, c * a.dx, c * a.dt, c * a.dxx};
}

inline constexpr Dual2 operator*(const Dual2& f, const Dual2& g) {
  return {f.val * g.val, f.dx * g.val + f.val * g.dx, f.dt * g.val + f.val * g.dt,
          f.dxx * g.val + 2.0 * f.dx * g.dx + f.val * g.dxx};
}

/// Applies a scalar function given its value and first two derivatives at
/// u.val (chain rule truncated at second order in x, first order in t).
inline constexpr Dual2 chain(const Dual2& u, double f0, double f1, double f2) {
  return {f0, f1 * u.dx, f1 * u.dt, f2 * u.dx * u.dx + f1 * u.dxx};
}

inline Dual2 reciprocal(const Dual2& g) {
  if (g.val == 0.0) throw ArithmeticError("Dual2 division by zero");
  const double q = 1.0 / g.val;
  return chain(g, q, -q * q, 2.0 * q * q * q);
}

inline Dual2 operator/(const Dual2& f, const Dual2& g) { return f * reciprocal(g); }

inline Dual2 tanh(const Dual2& u) {
  const double s = std::tanh(u.val);
  const double s1 = 1.0 - s * s;
  return chain(u, s, s1, -2.0 * s * s1);
}

inline Dual2 sin(const Dual2& u) {
  const double s = std::sin(u.val);
  return chain(u, s, std::cos(u.val), -s);
}

inline Dual2 exp(const Dual2& u) {
  const double e = std::exp(u.val);
  return chain(u, e, e, e);
}

}  // namespace pinnlab
