#pragma once

// Property suites shared by the `verify` subcommand and the acceptance binary.
// Each check compares the library against an independent route (adaptive
// Simpson, dense bisection, finite differences, a second flux formula) and
// reports the worst normalised discrepancy over its samples.

#include "swe/dg_solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace swe {

struct CheckResult {
  std::string name;
  double measured = 0;
  double tolerance = 0;
  int samples = 0;
  [[nodiscard]] bool passed() const { return measured <= tolerance; }
};

/// J₁…J₇ closed forms against adaptive quadrature of their defining averages (units of 1/λ_min).
CheckResult check_j_constants(int samples, std::uint64_t seed = 1);
/// d/dθ of each sector antiderivative against its integrand, five-point differences.
CheckResult check_antiderivatives(int samples, std::uint64_t seed = 2);
/// Sector angles against a dense sign-change scan with bisection, interior and seam rays (rad).
CheckResult check_sector_angles(int samples, std::uint64_t seed = 3);
/// L·R = I and R·Λ·L = A(θ), entrywise relative.
CheckResult check_eigensystem(int samples, std::uint64_t seed = 4);
/// Interface operator on equal traces returns the common state.
CheckResult check_constant_traces(int samples, std::uint64_t seed = 5);
/// Both cells' edge fluxes against the interface state's normal flux in each cell's own
/// coordinates, and the sum of their physical forms, on a rough W2-like field.
CheckResult check_edge_flux_two_sided(int degree, int n, std::uint64_t seed = 6);
/// max |dU/dt| of a constant-depth rest state over max|U| · wave rate.
CheckResult check_free_stream(int degree, int n, FluxMode mode);

/// Every suite above at the given sample count, free-stream and two-sided checks at K = 1..3.
std::vector<CheckResult> property_suite(int samples);

}  // namespace swe
