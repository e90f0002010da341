#pragma once

// Shallow-water state algebra in panel reference coordinates: conservative
// variables U = (Λh, Λhu, Λhv), fluxes, source terms and the directional
// characteristic eigensystem of the primitive system.

#include "swe/common.hpp"
#include "swe/geometry.hpp"

#include <cmath>
#include <utility>

namespace swe {

template <std::floating_point Scalar>
struct PhysicalConstants {
  Scalar g = Scalar(9.80616);
  Scalar radius = Scalar(6.37122e6);
  Scalar omega = Scalar(7.292e-5);
  Scalar alpha = 0;  ///< tilt of the rotation axis against the grid pole
};

/// Depth h (m) and contravariant velocity (rad/s).
template <std::floating_point Scalar>
struct Primitive {
  Scalar h = 0;
  Scalar u = 0;
  Scalar v = 0;

  [[nodiscard]] Vec2<Scalar> velocity() const { return {u, v}; }
  [[nodiscard]] Vec3<Scalar> vec() const { return {h, u, v}; }
  static Primitive from(const Vec3<Scalar>& w) { return {w[0], w[1], w[2]}; }
  static Primitive from(Scalar h, const Vec2<Scalar>& vel) { return {h, vel.x(), vel.y()}; }
};

template <std::floating_point Scalar>
Scalar coriolis(const SphericalPoint<Scalar>& s, const PhysicalConstants<Scalar>& pc) {
  return 2 * pc.omega *
         (-std::cos(s.lon) * std::cos(s.lat) * std::sin(pc.alpha) + std::sin(s.lat) * std::cos(pc.alpha));
}

template <std::floating_point Scalar>
Vec3<Scalar> prim_to_cons(const Primitive<Scalar>& w, Scalar jac) {
  if (!(w.h > 0)) raise(ErrorKind::NonPositiveDepth, "depth must be positive");
  const Scalar mass = jac * w.h;
  return {mass, mass * w.u, mass * w.v};
}

template <std::floating_point Scalar>
Primitive<Scalar> cons_to_prim(const Vec3<Scalar>& q, Scalar jac) {
  if (!(q[0] > 0)) raise(ErrorKind::NonPositiveDepth, "depth must be positive");
  return {q[0] / jac, q[1] / q[0], q[2] / q[0]};
}

template <std::floating_point Scalar>
struct FluxPair {
  Vec3<Scalar> f1;
  Vec3<Scalar> f2;
};

/// F₁, F₂ of the divergence form. `href` subtracts the constant ½g·h_ref² from
/// the pressure; its divergence vanishes identically on this grid.
template <std::floating_point Scalar>
FluxPair<Scalar> flux(const Primitive<Scalar>& w, const MetricData<Scalar>& m, Scalar g, Scalar href = 0) {
  if (!(w.h > 0)) raise(ErrorKind::NonPositiveDepth, "depth must be positive");
  const Scalar lam = m.jac, h = w.h;
  const Scalar p = Scalar(0.5) * g * (h * h - href * href);
  FluxPair<Scalar> f;
  f.f1 << lam * h * w.u, lam * (h * w.u * w.u + p * m.inv(0, 0)), lam * (h * w.u * w.v + p * m.inv(0, 1));
  f.f2 << lam * h * w.v, lam * (h * w.u * w.v + p * m.inv(0, 1)), lam * (h * w.v * w.v + p * m.inv(1, 1));
  return f;
}

template <std::floating_point Scalar>
FluxPair<Scalar> flux(const Vec3<Scalar>& q, const MetricData<Scalar>& m, Scalar g, Scalar href = 0) {
  return flux(cons_to_prim(q, m.jac), m, g, href);
}

/// F·n for a reference-coordinate normal n.
template <std::floating_point Scalar>
Vec3<Scalar> normal_flux(const Primitive<Scalar>& w, const Mat2<Scalar>& ginv, Scalar jac, const Vec2<Scalar>& n,
                         Scalar g, Scalar href = 0) {
  const Scalar un = w.u * n.x() + w.v * n.y();
  const Scalar p = Scalar(0.5) * g * (w.h * w.h - href * href);
  const Vec2<Scalar> gn = ginv * n;
  return {jac * w.h * un, jac * (w.h * w.u * un + p * gn.x()), jac * (w.h * w.v * un + p * gn.y())};
}

/// Metric, Coriolis and bottom-slope source of the divergence form; grad_b = (∂b/∂x, ∂b/∂y).
template <std::floating_point Scalar>
Vec3<Scalar> source_S0(const Primitive<Scalar>& w, const MetricData<Scalar>& m, Scalar f, const Vec2<Scalar>& grad_b,
                       Scalar g) {
  if (!(w.h > 0)) raise(ErrorKind::NonPositiveDepth, "depth must be positive");
  const Scalar h = w.h, u = w.u, v = w.v, lam = m.jac;
  const Mat2<Scalar>& gi = m.inv;
  const Scalar s1 = -m.gamma1_11 * h * u * u - 2 * m.gamma1_12 * h * u * v -
                    f * lam * (gi(0, 1) * h * u - gi(0, 0) * h * v) -
                    g * h * (gi(0, 0) * grad_b.x() + gi(0, 1) * grad_b.y());
  const Scalar s2 = -m.gamma2_22 * h * v * v - 2 * m.gamma2_12 * h * u * v -
                    f * lam * (gi(1, 1) * h * u - gi(0, 1) * h * v) -
                    g * h * (gi(0, 1) * grad_b.x() + gi(1, 1) * grad_b.y());
  return {0, lam * s1, lam * s2};
}

/// Source of the primitive form, derived from the divergence form so that both
/// describe the same smooth solutions (mass row carries the −h u·∇Λ/Λ term).
template <std::floating_point Scalar>
Vec3<Scalar> source_S1(const Primitive<Scalar>& w, const PanelPoint<Scalar>& p, const MetricData<Scalar>& m,
                       Scalar f, const Vec2<Scalar>& grad_b, Scalar g, Scalar radius) {
  if (!(w.h > 0)) raise(ErrorKind::NonPositiveDepth, "depth must be positive");
  const MetricDerivatives<Scalar> d = metric_derivatives_at(p, radius);
  const Scalar h = w.h, u = w.u, v = w.v, lam = m.jac;
  const Mat2<Scalar>& gi = m.inv;
  const Scalar topo1 = g * (gi(0, 0) * grad_b.x() + gi(0, 1) * grad_b.y());
  const Scalar topo2 = g * (gi(0, 1) * grad_b.x() + gi(1, 1) * grad_b.y());
  const Scalar geo1 = m.gamma1_11 * u * u + 2 * m.gamma1_12 * u * v + f * lam * (gi(0, 1) * u - gi(0, 0) * v) +
                      Scalar(0.5) * g * h * (d.dinv_dx(0, 0) + d.dinv_dy(0, 1)) +
                      Scalar(0.5) * g * h * (d.djac_dx * gi(0, 0) + d.djac_dy * gi(0, 1)) / lam;
  const Scalar geo2 = m.gamma2_22 * v * v + 2 * m.gamma2_12 * u * v + f * lam * (gi(1, 1) * u - gi(0, 1) * v) +
                      Scalar(0.5) * g * h * (d.dinv_dx(0, 1) + d.dinv_dy(1, 1)) +
                      Scalar(0.5) * g * h * (d.djac_dx * gi(0, 1) + d.djac_dy * gi(1, 1)) / lam;
  const Scalar mass = -h * (u * d.djac_dx + v * d.djac_dy) / lam;
  return {mass, -topo1 - geo1, -topo2 - geo2};
}

/// A₁, A₂ of the primitive form.
template <std::floating_point Scalar>
std::pair<Mat3<Scalar>, Mat3<Scalar>> primitive_matrices(const Primitive<Scalar>& w, const Mat2<Scalar>& ginv,
                                                         Scalar g) {
  Mat3<Scalar> a1, a2;
  a1 << w.u, w.h, 0, g * ginv(0, 0), w.u, 0, g * ginv(0, 1), 0, w.u;
  a2 << w.v, 0, w.h, g * ginv(0, 1), w.v, 0, g * ginv(1, 1), 0, w.v;
  return {a1, a2};
}

/// K_θ = |n|_{G⁻¹} and the components of G⁻¹n/K_θ.
template <std::floating_point Scalar>
struct DirectionFactors {
  Scalar k = 0;
  Scalar gc = 0;
  Scalar gs = 0;
};

template <std::floating_point Scalar>
DirectionFactors<Scalar> direction_factors(const Mat2<Scalar>& ginv, Scalar theta) {
  const Scalar c = std::cos(theta), s = std::sin(theta);
  const Scalar a = ginv(0, 0) * c + ginv(0, 1) * s;
  const Scalar b = ginv(0, 1) * c + ginv(1, 1) * s;
  const Scalar k = std::sqrt(a * c + b * s);
  return {k, a / k, b / k};
}

template <std::floating_point Scalar>
struct EigenSystem {
  Vec3<Scalar> lambda;
  Mat3<Scalar> left;
  Mat3<Scalar> right;
  Scalar k = 0;
  Scalar gc = 0;
  Scalar gs = 0;
  Scalar c = 0;
  Scalar vtheta = 0;
};

template <std::floating_point Scalar>
EigenSystem<Scalar> eigensystem(const Primitive<Scalar>& w, const Mat2<Scalar>& ginv, Scalar theta, Scalar g) {
  if (!(w.h > 0)) raise(ErrorKind::NonPositiveDepth, "depth must be positive");
  const DirectionFactors<Scalar> df = direction_factors(ginv, theta);
  const Scalar ct = std::cos(theta), st = std::sin(theta);
  EigenSystem<Scalar> e;
  e.k = df.k;
  e.gc = df.gc;
  e.gs = df.gs;
  e.c = std::sqrt(g * w.h);
  e.vtheta = w.u * ct + w.v * st;
  e.lambda << e.vtheta - e.c * e.k, e.vtheta, e.vtheta + e.c * e.k;
  const Scalar q = e.c / (2 * g * e.k);
  e.left << Scalar(-0.5), q * ct, q * st, 0, e.gs / e.k, -e.gc / e.k, Scalar(0.5), q * ct, q * st;
  const Scalar r = g / e.c;
  e.right << -1, 0, 1, r * e.gc, st, r * e.gc, r * e.gs, -ct, r * e.gs;
  return e;
}

}  // namespace swe
