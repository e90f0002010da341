#pragma once

// Test-only oracles: independent of the library's own quadrature and solvers.

#include "swe/common.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace swe::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240517);
  return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

namespace detail {

template <class Fn>
double simpson_rec(const Fn& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= std::max(15 * tol, 1e-14 * (std::abs(left) + std::abs(right))))
    return left + right + delta / 15;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction; `tol` is absolute.
/// The interval is pre-split into 16 panels so symmetric integrands cannot fake convergence.
template <class Fn>
double simpson(const Fn& f, double a, double b, double tol, int depth = 30) {
  constexpr int kPanels = 16;
  double sum = 0;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + (b - a) * i / kPanels, hi = a + (b - a) * (i + 1) / kPanels;
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    sum += detail::simpson_rec(f, lo, hi, fa, fm, fb, (hi - lo) / 6 * (fa + 4 * fm + fb), tol / kPanels, depth);
  }
  return sum;
}

/// Central difference with step h.
inline double central_diff(const auto& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

/// Five-point central difference.
inline double central_diff5(const auto& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Random SPD 2×2 matrix with eigenvalues in [lo, hi]·scale.
inline Mat2<double> random_spd(double lo, double hi, double scale = 1) {
  const double a = uniform(lo, hi), b = uniform(lo, hi), phi = uniform(0, kPi<double>);
  Mat2<double> q;
  q << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  Mat2<double> d = Mat2<double>::Zero();
  d(0, 0) = a * scale;
  d(1, 1) = b * scale;
  return q * d * q.transpose();
}

inline double rel_err(double a, double b, double floor = 1e-300) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace swe::test

#include "swe/swe_core.hpp"

#include <span>
#include <vector>

namespace swe::test {

/// Crossing angles of −d⁽¹⁾(θ) with each ray: dense sign-change scan then bisection.
inline std::vector<double> dense_crossings(const Primitive<double>& tilde, const Mat2<double>& ginv,
                                           std::span<const Vec2<double>> rays, double g, int samples) {
  const double c = std::sqrt(g * tilde.h);
  auto retreat = [&](double th) {
    const Vec2<double> n(std::cos(th), std::sin(th));
    const Vec2<double> w = ginv * n;
    return Vec2<double>(c * w / std::sqrt(n.dot(w)) - tilde.velocity());
  };
  std::vector<double> roots;
  for (const Vec2<double>& r0 : rays) {
    const Vec2<double> r = r0.normalized();
    auto f = [&](double th) { return cross2(retreat(th), r); };
    double prev_t = 0, prev_f = f(0);
    for (int i = 1; i <= samples; ++i) {
      const double t = kTwoPi<double> * i / samples;
      const double ft = f(t);
      if ((prev_f > 0) != (ft > 0)) {
        double lo = prev_t, hi = t, flo = prev_f;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid);
          if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; } else { hi = mid; }
        }
        const double root = 0.5 * (lo + hi);
        if (retreat(root).dot(r) > 0) roots.push_back(wrap_angle(root));
      }
      prev_t = t;
      prev_f = ft;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Smallest distance between two angles on the circle.
inline double angle_gap(double a, double b) {
  const double d = std::abs(wrap_angle(a - b));
  return std::min(d, kTwoPi<double> - d);
}

}  // namespace swe::test
