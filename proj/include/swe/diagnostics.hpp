#pragma once

// Error norms and conserved integrals of a DG solution. Integrals use the
// volume Gauss–Lobatto rule with area element Λ dx dy and a fixed cell order,
// so repeated evaluations are bitwise identical.

#include "swe/dg_solver.hpp"

#include <functional>

namespace swe {

using SphericalFn = std::function<SphericalState<double>(const SphericalPoint<double>&)>;

/// l1 = ∫|Δ| / ∫|q|, l2 = (∫Δ² / ∫q²)^½, l∞ = max|Δ| / max|q|. A vanishing
/// denominator (e.g. v_s of a zonal flow) falls back to the area-mean absolute
/// error, the root-mean-square error and max|Δ|.
struct ErrorNorms {
  double l1 = 0;
  double l2 = 0;
  double linf = 0;
};

struct FieldErrors {
  ErrorNorms h;
  ErrorNorms u;
  ErrorNorms v;
};

/// Relative errors against an exact field; oversample > 1 evaluates both on a
/// Gauss–Lobatto rule with oversample·(K+2) points per direction.
FieldErrors relative_errors(const DGSolver<double>& solver, const DGField<double>& field, const SphericalFn& exact,
                            int oversample = 1);

struct Conserved {
  double mass = 0;       ///< ∫h ds, the integral of the first conservative variable
  double energy = 0;     ///< ∫ ½h|u|² + ½g((h+b)² − b²) ds
  double enstrophy = 0;  ///< ∫ (ς + f)² / (2h) ds
};

Conserved conserved(const DGSolver<double>& solver, const DGField<double>& field);

/// Relative vorticity ς = Λ⁻¹(∂_x v̂ − ∂_y û) at reference point st of a cell,
/// differentiating the polynomial conservative variables.
double vorticity(const DGSolver<double>& solver, const DGField<double>& field, int cell, const Vec2<double>& st);

/// Area mean ∫q ds / ∫ds with a points×points Gauss–Lobatto rule per cell.
double area_mean(const Mesh& mesh, double radius, const std::function<double(const SphericalPoint<double>&)>& q,
                 int points = 4);

}  // namespace swe
