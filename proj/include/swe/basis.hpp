#pragma once

// Total-degree Legendre basis φ_ℓ(s, t) = P_i(s) P_j(t), i + j ≤ K, on the
// reference square [−1, 1]², ordered by total degree then by descending i.
// Orthogonal, with ∫φ_ℓ² = 4/((2i+1)(2j+1)).

#include "swe/common.hpp"
#include "swe/quadrature.hpp"

#include <utility>
#include <vector>

namespace swe {

inline constexpr int basis_size(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// (i, j) exponents of basis function ℓ.
inline std::pair<int, int> basis_index(int ell) {
  int d = 0;
  while (basis_size(d) <= ell) ++d;
  const int start = d == 0 ? 0 : basis_size(d - 1);
  const int i = d - (ell - start);
  return {i, d - i};
}

template <std::floating_point Scalar>
struct BasisValue {
  Scalar value = 0;
  Scalar ds = 0;  ///< ∂/∂s on the reference square
  Scalar dt = 0;
};

template <std::floating_point Scalar>
BasisValue<Scalar> basis_eval(int ell, Scalar s, Scalar t) {
  const auto [i, j] = basis_index(ell);
  const auto [pi, dpi] = legendre(i, s);
  const auto [pj, dpj] = legendre(j, t);
  return {pi * pj, dpi * pj, pi * dpj};
}

/// ∫_{[−1,1]²} φ_ℓ².
template <std::floating_point Scalar>
Scalar basis_norm2(int ell) {
  const auto [i, j] = basis_index(ell);
  return Scalar(4) / ((2 * i + 1) * (2 * j + 1));
}

}  // namespace swe
