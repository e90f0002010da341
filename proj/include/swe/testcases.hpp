#pragma once

// Initial conditions, topography, exact solutions and forcing of the seven
// benchmark flows. States are (depth h, u_s, v_s) in m and m/s.

#include "swe/dg_solver.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace swe {

enum class CaseId { W2, Lauter, W5, Deform, RH4, CrossPolar, Galewsky };

CaseId parse_case(const std::string& name);
const char* to_string(CaseId id) noexcept;

inline constexpr double kSecondsPerDay = 86400.0;

struct CaseParameters {
  double h0 = 0;     ///< reference depth/height (m)
  double u0 = 0;     ///< velocity scale (m/s), or angular scale (s⁻¹) for Deform
  double alpha = 0;  ///< flow tilt (W2, Läuter)
  // Läuter
  double k1 = 133681.0;
  double k2 = 0.0;
  // W5 mountain
  double b0 = 2000.0;
  double r0 = kPi<double> / 9;
  double lon_c = -kPi<double> / 2;
  double lat_c = kPi<double> / 6;
  // Deform
  double rho0 = 3.0;
  double gamma = 5.0;
  // RH4
  double rh_k = 7.848e-6;
  int rh_r = 4;
  // Galewsky
  double lat0 = kPi<double> / 7;
  double lat1 = kPi<double> / 2 - kPi<double> / 7;
  double h_hat = 120.0;
  double g_alpha = 1.0 / 3.0;
  double g_beta = 1.0 / 15.0;
  double lat2 = kPi<double> / 4;
  bool perturb = true;
};

class TestCase {
 public:
  TestCase(CaseId id, const PhysicalConstants<double>& constants, const CaseParameters& params);

  [[nodiscard]] CaseId id() const { return id_; }
  [[nodiscard]] const PhysicalConstants<double>& constants() const { return constants_; }
  [[nodiscard]] const CaseParameters& parameters() const { return params_; }
  [[nodiscard]] bool has_exact() const;
  [[nodiscard]] bool has_topography() const;
  [[nodiscard]] bool has_forcing() const { return id_ == CaseId::Deform; }

  [[nodiscard]] SphericalState<double> initial(const SphericalPoint<double>& s) const;
  /// Raises NoExactSolution when the case has none.
  [[nodiscard]] SphericalState<double> exact(const SphericalPoint<double>& s, double t) const;
  [[nodiscard]] double topography(const SphericalPoint<double>& s) const;
  /// Physical (east, north) gradient of the topography.
  [[nodiscard]] Vec2<double> topography_gradient(const SphericalPoint<double>& s) const;
  /// Extra momentum source (a_us, a_vs) in m/s²; zero except for Deform.
  [[nodiscard]] Vec2<double> forcing(const SphericalPoint<double>& s, double t) const;

  /// Deform angular velocity ω(η).
  [[nodiscard]] double deform_omega(double lat) const;
  /// Galewsky balanced-height integral g⁻¹∫R u_s (f + tanη′ u_s/R) dη′ up to `lat`.
  [[nodiscard]] double galewsky_balance(double lat) const;
  [[nodiscard]] double galewsky_jet(double lat) const;

  /// Solver problem description; href is the area-mean initial depth supplied by the caller.
  [[nodiscard]] Problem<double> problem(double href) const;

 private:
  SphericalState<double> w2_like(const SphericalPoint<double>& s, double h0, double u0, double alpha) const;
  SphericalState<double> lauter(const SphericalPoint<double>& s, double t) const;
  SphericalState<double> deform(const SphericalPoint<double>& s, double t) const;

  CaseId id_;
  PhysicalConstants<double> constants_;
  CaseParameters params_;
  struct BalanceCache {
    std::mutex guard;
    std::map<double, double> values;
  };
  std::shared_ptr<BalanceCache> cache_ = std::make_shared<BalanceCache>();
};

/// Case with the benchmark's published parameters and Earth constants.
TestCase make_case(CaseId id);

}  // namespace swe
