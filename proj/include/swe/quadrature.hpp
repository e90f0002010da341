#pragma once

// One-dimensional rules on [−1, 1] and an adaptive Gauss–Kronrod integrator.

#include "swe/common.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace swe {

/// P_n(x) and P_n′(x) by the three-term recurrence.
template <std::floating_point Scalar>
std::pair<Scalar, Scalar> legendre(int n, Scalar x) {
  if (n == 0) return {1, 0};
  Scalar p0 = 1, p1 = x, d0 = 0, d1 = 1;
  for (int k = 2; k <= n; ++k) {
    const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    const Scalar d2 = d0 + (2 * k - 1) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  return {p1, d1};
}

template <std::floating_point Scalar>
struct Rule1D {
  std::vector<Scalar> nodes;    ///< ascending
  std::vector<Scalar> weights;  ///< sum to 2
};

/// n-point Gauss–Lobatto rule (n ≥ 2): endpoints plus the roots of P′_{n−1};
/// exact for degree 2n − 3.
template <std::floating_point Scalar>
Rule1D<Scalar> gauss_lobatto(int n) {
  if (n < 2) raise(ErrorKind::Usage, "Gauss-Lobatto rule needs at least two nodes");
  Rule1D<Scalar> r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = n - 1;
  for (int i = 0; i < n; ++i) {
    Scalar x = -std::cos(kPi<Scalar> * i / m);
    if (i > 0 && i < m) {
      // Newton on (1 − x²)P′_m(x) = m(P_{m−1} − xP_m); its derivative is −m(m+1)P_m.
      for (int it = 0; it < 100; ++it) {
        const auto [pm, dm] = legendre(m, x);
        const Scalar f = (1 - x * x) * dm;
        const Scalar df = -m * (m + 1) * pm;
        const Scalar dx = f / df;
        x -= dx;
        if (std::abs(dx) < 4 * std::numeric_limits<Scalar>::epsilon()) break;
      }
    }
    const Scalar pm = legendre(m, x).first;
    r.nodes[i] = x;
    r.weights[i] = Scalar(2) / (m * (m + 1) * pm * pm);
  }
  return r;
}

/// n-point Gauss–Legendre rule; exact for degree 2n − 1.
template <std::floating_point Scalar>
Rule1D<Scalar> gauss_legendre(int n) {
  if (n < 1) raise(ErrorKind::Usage, "Gauss-Legendre rule needs at least one node");
  Rule1D<Scalar> r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    Scalar x = -std::cos(kPi<Scalar> * (i + Scalar(0.75)) / (n + Scalar(0.5)));
    Scalar d = 1;
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      d = dp;
      const Scalar dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 4 * std::numeric_limits<Scalar>::epsilon()) break;
    }
    d = legendre(n, x).second;
    r.nodes[i] = x;
    r.weights[i] = 2 / ((1 - x * x) * d * d);
  }
  return r;
}

namespace detail {

// Kronrod 15-point extension of the 7-point Gauss rule (nodes on [0, 1], symmetric).
inline constexpr std::array<double, 8> kKronrodNodes{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                                    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                                    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                                    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                                      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                                      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                                      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::floating_point Scalar, class Fn>
Scalar kronrod_adapt(const Fn& f, Scalar a, Scalar b, Scalar tol, int depth) {
  const Scalar mid = Scalar(0.5) * (a + b), half = Scalar(0.5) * (b - a);
  Scalar k15 = Scalar(kKronrodWeights[7]) * f(mid);
  Scalar g7 = Scalar(kGaussWeights[3]) * f(mid);
  for (int i = 0; i < 7; ++i) {
    const Scalar dx = half * Scalar(kKronrodNodes[i]);
    const Scalar s = f(mid - dx) + f(mid + dx);
    k15 += Scalar(kKronrodWeights[i]) * s;
    if (i % 2 == 1) g7 += Scalar(kGaussWeights[i / 2]) * s;
  }
  k15 *= half;
  g7 *= half;
  if (std::abs(k15 - g7) <= tol || depth <= 0) return k15;
  return kronrod_adapt(f, a, mid, tol / 2, depth - 1) + kronrod_adapt(f, mid, b, tol / 2, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss–Kronrod (7/15) integral of f over [a, b] to absolute tolerance `tol`.
template <std::floating_point Scalar, class Fn>
Scalar integrate_adaptive(const Fn& f, Scalar a, Scalar b, Scalar tol, int max_depth = 40) {
  if (a == b) return 0;
  return detail::kronrod_adapt(f, a, b, tol, max_depth);
}

}  // namespace swe
