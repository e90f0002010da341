#pragma once

// Equiangular cubed-sphere geometry. Panels 1–4 straddle the equator with
// centres at longitudes 0, π/2, π, 3π/2; panel 5 caps the north pole and
// panel 6 the south pole. Every panel uses local x eastward, y northward
// (polar panels inherit panel 1's frame rotated onto the pole).

#include "swe/common.hpp"

#include <cmath>
#include <utility>

namespace swe {

template <std::floating_point Scalar>
struct PanelPoint {
  int panel = 1;
  Scalar x = 0;
  Scalar y = 0;
};

/// lon ∈ [−π, π), lat ∈ [−π/2, π/2].
template <std::floating_point Scalar>
struct SphericalPoint {
  Scalar lon = 0;
  Scalar lat = 0;
};

template <std::floating_point Scalar>
struct MetricData {
  Mat2<Scalar> cov;  ///< g_ij (m²)
  Mat2<Scalar> inv;  ///< g^ij (m⁻²)
  Scalar jac = 0;    ///< Λ = sqrt(det G)
  Scalar gamma1_11 = 0;
  Scalar gamma1_12 = 0;
  Scalar gamma2_12 = 0;
  Scalar gamma2_22 = 0;
};

/// Analytic x/y derivatives of g^ij and Λ.
template <std::floating_point Scalar>
struct MetricDerivatives {
  Mat2<Scalar> dinv_dx;
  Mat2<Scalar> dinv_dy;
  Scalar djac_dx = 0;
  Scalar djac_dy = 0;
};

/// A maps contravariant (u, v) to (u_s, v_s); Aᵀ maps (u_s, v_s) to covariant (û, v̂).
template <std::floating_point Scalar> using VelocityMatrix = Mat2<Scalar>;

inline constexpr int kPanels = 6;

/// Columns: panel centre, local x direction, local y direction.
template <std::floating_point Scalar>
Mat3<Scalar> panel_axes(int panel) {
  Mat3<Scalar> m;
  switch (panel) {
    case 1: m.col(0) << 1, 0, 0; m.col(1) << 0, 1, 0; m.col(2) << 0, 0, 1; break;
    case 2: m.col(0) << 0, 1, 0; m.col(1) << -1, 0, 0; m.col(2) << 0, 0, 1; break;
    case 3: m.col(0) << -1, 0, 0; m.col(1) << 0, -1, 0; m.col(2) << 0, 0, 1; break;
    case 4: m.col(0) << 0, -1, 0; m.col(1) << 1, 0, 0; m.col(2) << 0, 0, 1; break;
    case 5: m.col(0) << 0, 0, 1; m.col(1) << 0, 1, 0; m.col(2) << -1, 0, 0; break;
    case 6: m.col(0) << 0, 0, -1; m.col(1) << 0, 1, 0; m.col(2) << 1, 0, 0; break;
    default: raise(ErrorKind::OutOfPanel, "panel index must be in 1..6");
  }
  return m;
}

template <std::floating_point Scalar>
Vec3<Scalar> panel_to_cartesian(const PanelPoint<Scalar>& p) {
  const Vec3<Scalar> local(1, std::tan(p.x), std::tan(p.y));
  return panel_axes<Scalar>(p.panel) * (local / local.norm());
}

template <std::floating_point Scalar>
Vec3<Scalar> sphere_to_cartesian(const SphericalPoint<Scalar>& s) {
  const Scalar c = std::cos(s.lat);
  return {c * std::cos(s.lon), c * std::sin(s.lon), std::sin(s.lat)};
}

/// Longitude is fixed to 0 at the exact poles.
template <std::floating_point Scalar>
SphericalPoint<Scalar> cartesian_to_sphere(const Vec3<Scalar>& r) {
  const Scalar horiz = std::hypot(r.x(), r.y());
  SphericalPoint<Scalar> s;
  s.lat = std::atan2(r.z(), horiz);
  s.lon = horiz > 0 ? std::atan2(r.y(), r.x()) : Scalar(0);
  if (s.lon >= kPi<Scalar>) s.lon -= kTwoPi<Scalar>;
  return s;
}

template <std::floating_point Scalar>
SphericalPoint<Scalar> panel_to_sphere(const PanelPoint<Scalar>& p) {
  return cartesian_to_sphere(panel_to_cartesian(p));
}

/// Panel whose image contains r (largest-component rule; ties go to the lower index).
template <std::floating_point Scalar>
int panel_of(const Vec3<Scalar>& r) {
  int best = 1;
  Scalar best_val = -2;
  for (int p = 1; p <= kPanels; ++p) {
    const Scalar v = r.dot(panel_axes<Scalar>(p).col(0));
    if (v > best_val + Scalar(1e-14)) {
      best_val = v;
      best = p;
    }
  }
  return best;
}

template <std::floating_point Scalar>
PanelPoint<Scalar> cartesian_to_panel(const Vec3<Scalar>& r, int panel, Scalar tol = Scalar(1e-12)) {
  const Mat3<Scalar> ax = panel_axes<Scalar>(panel);
  const Scalar depth = r.dot(ax.col(0));
  const Scalar quarter = kPi<Scalar> / 4;
  if (depth <= 0) raise(ErrorKind::OutOfPanel, "point lies on the far hemisphere of the panel");
  PanelPoint<Scalar> p{panel, std::atan(r.dot(ax.col(1)) / depth), std::atan(r.dot(ax.col(2)) / depth)};
  if (std::abs(p.x) > quarter + tol || std::abs(p.y) > quarter + tol)
    raise(ErrorKind::OutOfPanel, "point lies outside the panel image");
  p.x = std::clamp(p.x, -quarter, quarter);
  p.y = std::clamp(p.y, -quarter, quarter);
  return p;
}

template <std::floating_point Scalar>
PanelPoint<Scalar> sphere_to_panel(const SphericalPoint<Scalar>& s, int panel) {
  return cartesian_to_panel(sphere_to_cartesian(s), panel);
}

template <std::floating_point Scalar>
MetricData<Scalar> metric_at(const PanelPoint<Scalar>& p, Scalar radius) {
  const Scalar tx = std::tan(p.x), ty = std::tan(p.y);
  const Scalar cx2 = std::cos(p.x) * std::cos(p.x), cy2 = std::cos(p.y) * std::cos(p.y);
  const Scalar rho2 = 1 + tx * tx + ty * ty;
  const Scalar r2 = radius * radius;
  MetricData<Scalar> m;
  const Scalar pref = r2 / (rho2 * rho2 * cx2 * cy2);
  m.cov << pref * (1 + tx * tx), -pref * tx * ty, -pref * tx * ty, pref * (1 + ty * ty);
  const Scalar ipref = rho2 * cx2 * cy2 / r2;
  m.inv << rho2 * cx2 / r2, ipref * tx * ty, ipref * tx * ty, rho2 * cy2 / r2;
  m.jac = r2 / (rho2 * std::sqrt(rho2) * cx2 * cy2);
  m.gamma1_11 = 2 * tx * ty * ty / rho2;
  m.gamma1_12 = -ty / (rho2 * cy2);
  m.gamma2_12 = -tx / (rho2 * cx2);
  m.gamma2_22 = 2 * tx * tx * ty / rho2;
  return m;
}

template <std::floating_point Scalar>
MetricDerivatives<Scalar> metric_derivatives_at(const PanelPoint<Scalar>& p, Scalar radius) {
  const Scalar tx = std::tan(p.x), ty = std::tan(p.y);
  const Scalar sx = std::sin(p.x), cx = std::cos(p.x), sy = std::sin(p.y), cy = std::cos(p.y);
  const Scalar rho2 = 1 + tx * tx + ty * ty;
  const Scalar r2 = radius * radius;
  const Scalar sec2x = 1 / (cx * cx), sec2y = 1 / (cy * cy);
  // g¹¹ = ρ²cos²x/R², g²² = ρ²cos²y/R², g¹² = ρ² sin x cos x sin y cos y/R².
  const Scalar d11_dx = 2 * (tx - rho2 * sx * cx) / r2;
  const Scalar d11_dy = 2 * ty * sec2y * cx * cx / r2;
  const Scalar d22_dx = 2 * tx * sec2x * cy * cy / r2;
  const Scalar d22_dy = 2 * (ty - rho2 * sy * cy) / r2;
  const Scalar d12_dx = (sy * cy / r2) * (2 * tx * tx + rho2 * std::cos(2 * p.x));
  const Scalar d12_dy = (sx * cx / r2) * (2 * ty * ty + rho2 * std::cos(2 * p.y));
  MetricDerivatives<Scalar> d;
  d.dinv_dx << d11_dx, d12_dx, d12_dx, d22_dx;
  d.dinv_dy << d11_dy, d12_dy, d12_dy, d22_dy;
  const Scalar jac = r2 / (rho2 * std::sqrt(rho2) * cx * cx * cy * cy);
  d.djac_dx = jac * (2 * tx - 3 * tx * sec2x / rho2);
  d.djac_dy = jac * (2 * ty - 3 * ty * sec2y / rho2);
  return d;
}

/// Covariant basis vectors ∂r/∂x, ∂r/∂y on the sphere of the given radius.
template <std::floating_point Scalar>
std::pair<Vec3<Scalar>, Vec3<Scalar>> tangent_vectors(const PanelPoint<Scalar>& p, Scalar radius) {
  const Scalar a = std::tan(p.x), b = std::tan(p.y);
  const Vec3<Scalar> local(1, a, b);
  const Scalar rho = local.norm();
  const Mat3<Scalar> ax = panel_axes<Scalar>(p.panel);
  const Scalar sec2x = 1 + a * a, sec2y = 1 + b * b;
  const Vec3<Scalar> dx = sec2x * (Vec3<Scalar>(0, 1, 0) - local * (a / (rho * rho))) / rho;
  const Vec3<Scalar> dy = sec2y * (Vec3<Scalar>(0, 0, 1) - local * (b / (rho * rho))) / rho;
  return {radius * (ax * dx), radius * (ax * dy)};
}

/// Unit east and north vectors; at the exact poles the lon = 0 meridian is used.
template <std::floating_point Scalar>
std::pair<Vec3<Scalar>, Vec3<Scalar>> east_north(const Vec3<Scalar>& r) {
  const Scalar horiz = std::hypot(r.x(), r.y());
  if (horiz == 0) {
    const Scalar z = r.z() >= 0 ? Scalar(1) : Scalar(-1);
    return {Vec3<Scalar>(0, 1, 0), Vec3<Scalar>(-z, 0, 0)};
  }
  const Vec3<Scalar> east(-r.y() / horiz, r.x() / horiz, 0);
  const Vec3<Scalar> north(-r.z() * r.x() / horiz, -r.z() * r.y() / horiz, horiz);
  return {east, north};
}

template <std::floating_point Scalar>
VelocityMatrix<Scalar> velocity_matrix_at(const PanelPoint<Scalar>& p, Scalar radius) {
  const auto [ax, ay] = tangent_vectors(p, radius);
  const auto [east, north] = east_north(panel_to_cartesian(p));
  VelocityMatrix<Scalar> a;
  a << east.dot(ax), east.dot(ay), north.dot(ax), north.dot(ay);
  return a;
}

template <std::floating_point Scalar>
Vec2<Scalar> contravariant_to_spherical(const VelocityMatrix<Scalar>& a, const Vec2<Scalar>& uv) {
  return a * uv;
}

template <std::floating_point Scalar>
Vec2<Scalar> spherical_to_contravariant(const VelocityMatrix<Scalar>& a, const Vec2<Scalar>& us) {
  return a.inverse() * us;
}

template <std::floating_point Scalar>
Vec2<Scalar> spherical_to_covariant(const VelocityMatrix<Scalar>& a, const Vec2<Scalar>& us) {
  return a.transpose() * us;
}

}  // namespace swe
