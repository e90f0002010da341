#pragma once

// Bicharacteristic directions of the frozen-coefficient primitive system and
// the partition of the direction circle into sectors whose retarded base
// points Q(θ) = P − τ d⁽¹⁾(θ) fall into a single neighbouring cell.
//
// Cell edges through P are described by rays (chart directions leaving P).
// Q(θ) crosses a ray where −d⁽¹⁾(θ) is parallel to it. Writing the crossing
// function F_r(θ) = (−d⁽¹⁾(θ)) × r gives F_r′(θ) = −c det(G⁻¹) (n_θ·r)/K_θ³, so
// F_r is strictly monotone on the two half circles split at angle(r) ± π/2 and
// each half holds at most one root. Both line edges and the kinked grid lines
// at panel seams reduce to this form.

#include "swe/common.hpp"
#include "swe/swe_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

namespace swe {

inline constexpr int kMaxRays = 4;
inline constexpr int kMaxSectors = 2 * kMaxRays;

template <std::floating_point Scalar>
struct SectorPartition {
  std::array<Scalar, kMaxSectors> angles{};
  int nhat = 1;

  [[nodiscard]] std::span<const Scalar> view() const { return {angles.data(), static_cast<std::size_t>(nhat)}; }
  /// End of sector i, unwrapped so that it exceeds its start.
  [[nodiscard]] Scalar upper(int i) const { return i + 1 < nhat ? angles[i + 1] : angles[0] + kTwoPi<Scalar>; }
};

template <std::floating_point Scalar>
struct BicharDirections {
  Vec2<Scalar> d1;  ///< ℓ = 1
  Vec2<Scalar> d2;  ///< ℓ = 2, the advective direction
  Vec2<Scalar> d3;  ///< ℓ = 3
};

template <std::floating_point Scalar>
BicharDirections<Scalar> directions(const Primitive<Scalar>& tilde, const Mat2<Scalar>& ginv, Scalar theta, Scalar g) {
  if (!(tilde.h > 0)) raise(ErrorKind::NonPositiveDepth, "linearisation depth must be positive");
  const DirectionFactors<Scalar> df = direction_factors(ginv, theta);
  const Scalar c = std::sqrt(g * tilde.h);
  const Vec2<Scalar> adv = tilde.velocity();
  const Vec2<Scalar> wave(c * df.gc, c * df.gs);
  return {adv - wave, adv, adv + wave};
}

enum class EdgeOrientation {
  XNormal,  ///< edge x = const, tangent along y
  YNormal,  ///< edge y = const, tangent along x
};

namespace detail {

template <std::floating_point Scalar>
struct CrossingFn {
  Vec2<Scalar> adv;
  Mat2<Scalar> ginv;
  Scalar c;
  Scalar det;
  Vec2<Scalar> ray;

  [[nodiscard]] Vec2<Scalar> retreat(Scalar theta) const {
    const Vec2<Scalar> n(std::cos(theta), std::sin(theta));
    const Vec2<Scalar> w = ginv * n;
    return c * w / std::sqrt(n.dot(w)) - adv;
  }
  [[nodiscard]] Scalar value(Scalar theta) const { return cross2(retreat(theta), ray); }
  [[nodiscard]] Scalar slope(Scalar theta) const {
    const Vec2<Scalar> n(std::cos(theta), std::sin(theta));
    const Scalar k2 = n.dot(ginv * n);
    return -c * det * n.dot(ray) / (k2 * std::sqrt(k2));
  }
};

/// Safeguarded Newton on a sign-changing bracket; bisection whenever a step leaves it.
template <std::floating_point Scalar, class Fn>
Scalar bracketed_newton(const Fn& fn, Scalar lo, Scalar hi, Scalar f_lo, Scalar ftol, Scalar x0) {
  Scalar x = x0 > lo && x0 < hi ? x0 : Scalar(0.5) * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const Scalar fx = fn.value(x);
    if (!std::isfinite(fx)) break;
    if (std::abs(fx) < ftol) return x;
    if ((fx > 0) == (f_lo > 0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
    }
    if (hi - lo < Scalar(4) * std::numeric_limits<Scalar>::epsilon() * (1 + std::abs(x))) return x;
    const Scalar df = fn.slope(x);
    Scalar next = df != 0 ? x - fx / df : lo - 1;
    if (!(next > lo && next < hi)) next = Scalar(0.5) * (lo + hi);
    x = next;
  }
  raise(ErrorKind::NewtonDiverged, "sector-angle iteration failed to converge");
}

/// Angles solving nᵀQn = 0 for the squared crossing condition, Q = c²ppᵀ − a²G⁻¹
/// with p = G⁻¹J r and a = ũ × r; they seed Newton on the unsquared condition.
template <std::floating_point Scalar>
std::array<Scalar, 4> crossing_guesses(const CrossingFn<Scalar>& fn) {
  const Vec2<Scalar> p = fn.ginv * Vec2<Scalar>(fn.ray.y(), -fn.ray.x());
  const Scalar a = cross2(fn.adv, fn.ray);
  const Mat2<Scalar> q = fn.c * fn.c * p * p.transpose() - a * a * fn.ginv;
  // Stable roots of A z² + 2 q01 z + C in z = cot θ (or tan θ when |q11| > |q00|).
  const bool cot = std::abs(q(0, 0)) >= std::abs(q(1, 1));
  const Scalar big = cot ? q(0, 0) : q(1, 1), small = cot ? q(1, 1) : q(0, 0);
  const Scalar sq = std::sqrt(std::max(q(0, 1) * q(0, 1) - big * small, Scalar(0)));
  const Scalar r = -(q(0, 1) + std::copysign(sq, q(0, 1)));
  const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
  const Scalar z1 = big != 0 ? r / big : nan, z2 = r != 0 ? small / r : z1;
  const Scalar t1 = cot ? std::atan2(Scalar(1), z1) : std::atan2(z1, Scalar(1));
  const Scalar t2 = cot ? std::atan2(Scalar(1), z2) : std::atan2(z2, Scalar(1));
  return {t1, t1 + kPi<Scalar>, t2, t2 + kPi<Scalar>};
}

/// Guess in (lo, hi) modulo 2π with the smallest residual (squaring adds spurious roots), or the midpoint.
template <std::floating_point Scalar>
Scalar seed_in(const CrossingFn<Scalar>& fn, const std::array<Scalar, 4>& guesses, Scalar lo, Scalar hi) {
  Scalar best = Scalar(0.5) * (lo + hi), best_f = std::abs(fn.value(best));
  for (Scalar g : guesses) {
    g = lo + std::fmod(std::fmod(g - lo, kTwoPi<Scalar>) + kTwoPi<Scalar>, kTwoPi<Scalar>);
    if (!(g > lo && g < hi)) continue;
    const Scalar f = std::abs(fn.value(g));
    if (f < best_f) {
      best = g;
      best_f = f;
    }
  }
  return best;
}

}  // namespace detail

/// Sorted crossing angles of the cone base with the given edge rays.
template <std::floating_point Scalar>
SectorPartition<Scalar> sector_partition(const Primitive<Scalar>& tilde, const Mat2<Scalar>& ginv,
                                         std::span<const Vec2<Scalar>> rays, Scalar g) {
  if (!(tilde.h > 0)) raise(ErrorKind::NonPositiveDepth, "linearisation depth must be positive");
  const Scalar c = std::sqrt(g * tilde.h);
  const Scalar det = ginv.determinant();
  const Scalar lam_max = Scalar(0.5) * (ginv.trace() + std::hypot(ginv(0, 0) - ginv(1, 1), 2 * ginv(0, 1)));
  const Scalar scale = c * std::sqrt(lam_max);
  const Scalar tie = Scalar(1e-12) * scale;
  const Scalar ftol = Scalar(1e-13) * scale;

  std::array<Scalar, kMaxSectors> roots{};
  int count = 0;
  for (const Vec2<Scalar>& r : rays) {
    const Vec2<Scalar> unit = r / r.norm();
    const detail::CrossingFn<Scalar> fn{tilde.velocity(), ginv, c, det, unit};
    const Scalar beta = std::atan2(unit.y(), unit.x());
    const Scalar lo = beta - kPi<Scalar> / 2, mid = beta + kPi<Scalar> / 2, hi = beta + 3 * kPi<Scalar> / 2;
    const Scalar f_max = fn.value(lo), f_min = fn.value(mid);
    if (!(f_max > tie && f_min < -tie)) continue;
    const std::array<Scalar, 4> guesses = detail::crossing_guesses(fn);
    for (const Scalar root : {detail::bracketed_newton(fn, lo, mid, f_max, ftol, detail::seed_in(fn, guesses, lo, mid)),
                              detail::bracketed_newton(fn, mid, hi, f_min, ftol, detail::seed_in(fn, guesses, mid, hi))}) {
      if (fn.retreat(root).dot(unit) > 0 && count < kMaxSectors) roots[count++] = wrap_angle(root);
    }
  }
  SectorPartition<Scalar> part;
  if (count == 0) {
    part.nhat = 1;
    part.angles[0] = 0;
    return part;
  }
  std::sort(roots.begin(), roots.begin() + count);
  int n = 0;
  for (int i = 0; i < count; ++i) {
    if (n > 0 && roots[i] - part.angles[n - 1] < Scalar(1e-10)) continue;
    part.angles[n++] = roots[i];
  }
  if (n > 1 && part.angles[0] + kTwoPi<Scalar> - part.angles[n - 1] < Scalar(1e-10)) --n;
  part.nhat = n;
  return part;
}

template <std::floating_point Scalar>
SectorPartition<Scalar> sector_angles_edge_interior(const Primitive<Scalar>& tilde, const Mat2<Scalar>& ginv,
                                                    EdgeOrientation orientation, Scalar g) {
  const std::array<Vec2<Scalar>, 2> rays =
      orientation == EdgeOrientation::YNormal
          ? std::array<Vec2<Scalar>, 2>{Vec2<Scalar>(1, 0), Vec2<Scalar>(-1, 0)}
          : std::array<Vec2<Scalar>, 2>{Vec2<Scalar>(0, 1), Vec2<Scalar>(0, -1)};
  return sector_partition<Scalar>(tilde, ginv, rays, g);
}

template <std::floating_point Scalar>
SectorPartition<Scalar> sector_angles_vertex(const Primitive<Scalar>& tilde, const Mat2<Scalar>& ginv, Scalar g) {
  const std::array<Vec2<Scalar>, 4> rays{Vec2<Scalar>(1, 0), Vec2<Scalar>(0, 1), Vec2<Scalar>(-1, 0),
                                         Vec2<Scalar>(0, -1)};
  return sector_partition<Scalar>(tilde, ginv, rays, g);
}

/// Inverse metric of the longitude/latitude chart (angles as coordinates).
template <std::floating_point Scalar>
Mat2<Scalar> latlon_inverse_metric(Scalar lat, Scalar radius) {
  const Scalar rc = radius * std::cos(lat);
  Mat2<Scalar> m;
  m << 1 / (rc * rc), 0, 0, 1 / (radius * radius);
  return m;
}

/// (h, u_s, v_s) in m/s to the chart state (h, dξ/dt, dη/dt).
template <std::floating_point Scalar>
Primitive<Scalar> latlon_to_chart(const Primitive<Scalar>& s, Scalar lat, Scalar radius) {
  return {s.h, s.u / (radius * std::cos(lat)), s.v / radius};
}

template <std::floating_point Scalar>
Primitive<Scalar> chart_to_latlon(const Primitive<Scalar>& w, Scalar lat, Scalar radius) {
  return {w.h, w.u * radius * std::cos(lat), w.v * radius};
}

/// Partition at a panel-seam point; `rays` are edge directions in (dξ, dη) and
/// `tilde_s` carries (h, u_s, v_s).
template <std::floating_point Scalar>
SectorPartition<Scalar> sector_angles_panel_boundary(const Primitive<Scalar>& tilde_s, Scalar lat0,
                                                     std::span<const Vec2<Scalar>> rays, Scalar g, Scalar radius) {
  if (std::abs(lat0) > kPi<Scalar> / 2 - Scalar(1e-6))
    raise(ErrorKind::PoleSingularity, "seam point too close to a pole");
  return sector_partition(latlon_to_chart(tilde_s, lat0, radius), latlon_inverse_metric(lat0, radius), rays, g);
}

/// Crossing test against the curve tan η = cos ξ · tan y (ξ relative to the panel
/// centre longitude); `d` is d⁽¹⁾(θ) in the longitude/latitude chart.
template <std::floating_point Scalar>
Scalar seam_function_c(const Vec2<Scalar>& d, Scalar lon_rel, Scalar lat0, Scalar y) {
  const Scalar sec = 1 / std::cos(lat0);
  return sec * sec * d.y() + std::sin(lon_rel) * std::tan(y) * d.x();
}

/// Crossing test against polar-panel x = const curves.
template <std::floating_point Scalar>
Scalar seam_function_s(const Vec2<Scalar>& d, Scalar lon_rel, Scalar lat0, Scalar x) {
  const Scalar sec = 1 / std::cos(lat0);
  return sec * sec * std::tan(x) * d.y() - std::cos(lon_rel) * d.x();
}

}  // namespace swe
