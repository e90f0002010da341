#include "doctest.h"
#include "support.hpp"
#include "swe/testcases.hpp"

using namespace swe;
using swe::test::uniform;

namespace {

// Pointwise residual of the spherical shallow-water equations for a case's
// exact solution, by central differences in (ξ, η, t); rows are scaled by the
// magnitude of their largest term so the result is a relative defect.
Vec3<double> pde_defect(const TestCase& tc, const SphericalPoint<double>& s, double t) {
  const PhysicalConstants<double>& pc = tc.constants();
  const double r = pc.radius, g = pc.g, ce = std::cos(s.lat), te = std::tan(s.lat);
  const double dx = 1e-5, dt = 10;
  auto at = [&](double lon, double lat, double time) { return tc.exact({lon, lat}, time); };
  auto surf = [&](double lon, double lat) { return at(lon, lat, t).h + tc.topography({lon, lat}); };
  const SphericalState<double> w = at(s.lon, s.lat, t);
  const SphericalState<double> wx1 = at(s.lon + dx, s.lat, t), wx0 = at(s.lon - dx, s.lat, t);
  const SphericalState<double> we1 = at(s.lon, s.lat + dx, t), we0 = at(s.lon, s.lat - dx, t);
  const SphericalState<double> wt1 = at(s.lon, s.lat, t + dt), wt0 = at(s.lon, s.lat, t - dt);
  auto d = [](double a, double b, double step) { return (a - b) / (2 * step); };
  const double h_t = d(wt1.h, wt0.h, dt), u_t = d(wt1.u, wt0.u, dt), v_t = d(wt1.v, wt0.v, dt);
  const double hu_x = d(wx1.h * wx1.u, wx0.h * wx0.u, dx);
  const double hvc_y = d(we1.h * we1.v * std::cos(s.lat + dx), we0.h * we0.v * std::cos(s.lat - dx), dx);
  const double u_x = d(wx1.u, wx0.u, dx), u_y = d(we1.u, we0.u, dx);
  const double v_x = d(wx1.v, wx0.v, dx), v_y = d(we1.v, we0.v, dx);
  const double s_x = d(surf(s.lon + dx, s.lat), surf(s.lon - dx, s.lat), dx);
  const double s_y = d(surf(s.lon, s.lat + dx), surf(s.lon, s.lat - dx), dx);
  const double f = coriolis(s, pc) + w.u * te / r;
  const Vec2<double> a = tc.forcing(s, t);
  const double mass_terms[] = {h_t, hu_x / (r * ce), hvc_y / (r * ce)};
  const double u_terms[] = {u_t, w.u * u_x / (r * ce), w.v * u_y / r, -f * w.v, g * s_x / (r * ce), -a.x()};
  const double v_terms[] = {v_t, w.u * v_x / (r * ce), w.v * v_y / r, f * w.u, g * s_y / r, -a.y()};
  auto rel = [](const auto& terms) {
    double sum = 0, scale = 1e-300;
    for (double x : terms) {
      sum += x;
      scale = std::max(scale, std::abs(x));
    }
    return std::abs(sum) / scale;
  };
  return {rel(mass_terms), rel(u_terms), rel(v_terms)};
}

SphericalPoint<double> random_point(double lat_limit = 1.4) {
  return {uniform(-kPi<double>, kPi<double>), uniform(-lat_limit, lat_limit)};
}

}  // namespace

TEST_CASE("case names round trip and unknown names are usage errors") {
  for (CaseId id : {CaseId::W2, CaseId::Lauter, CaseId::W5, CaseId::Deform, CaseId::RH4, CaseId::CrossPolar,
                    CaseId::Galewsky})
    CHECK(parse_case(to_string(id)) == id);
  try {
    (void)parse_case("w3");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Usage);
  }
}

TEST_CASE("exact solutions satisfy the spherical shallow-water equations") {
  for (CaseId id : {CaseId::W2, CaseId::Lauter, CaseId::Deform}) {
    const TestCase tc = make_case(id);
    CAPTURE(to_string(id));
    for (int i = 0; i < 200; ++i) {
      const SphericalPoint<double> s = random_point();
      const double t = uniform(0, 2 * kSecondsPerDay);
      const Vec3<double> defect = pde_defect(tc, s, t);
      CHECK(defect.maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("tilted Williamson 2 remains an exact steady state") {
  const TestCase base = make_case(CaseId::W2);
  CaseParameters p = base.parameters();
  p.alpha = 0.7;
  const TestCase tc(CaseId::W2, base.constants(), p);
  CHECK(tc.constants().alpha == 0.7);
  for (int i = 0; i < 100; ++i) CHECK(pde_defect(tc, random_point(), 0).maxCoeff() < 1e-6);
}

TEST_CASE("Läuter topography makes the initial depth match the published surface") {
  const TestCase tc = make_case(CaseId::Lauter);
  for (int i = 0; i < 100; ++i) {
    const SphericalPoint<double> s = random_point();
    const SphericalState<double> w = tc.initial(s);
    CHECK(w.h > 0);
    CHECK(std::abs(w.h - tc.exact(s, 0).h) == 0);
  }
}

TEST_CASE("topography gradients match finite differences") {
  for (CaseId id : {CaseId::Lauter, CaseId::W5}) {
    const TestCase tc = make_case(id);
    const double r = tc.constants().radius, dx = 1e-6;
    for (int i = 0; i < 300; ++i) {
      const SphericalPoint<double> s = random_point(1.3);
      const Vec2<double> grad = tc.topography_gradient(s);
      const double bx = (tc.topography({s.lon + dx, s.lat}) - tc.topography({s.lon - dx, s.lat})) / (2 * dx);
      const double by = (tc.topography({s.lon, s.lat + dx}) - tc.topography({s.lon, s.lat - dx})) / (2 * dx);
      // W5's cone is non-differentiable at its apex and rim; skip points next to them.
      if (id == CaseId::W5) {
        const double dist = std::hypot(s.lon - tc.parameters().lon_c, s.lat - tc.parameters().lat_c);
        if (std::abs(dist - tc.parameters().r0) < 1e-4 || dist < 1e-4) continue;
      }
      CHECK(std::abs(grad.x() - bx / (r * std::cos(s.lat))) < 1e-7 * (1 + std::abs(grad.x()) * r));
      CHECK(std::abs(grad.y() - by / r) < 1e-7 * (1 + std::abs(grad.y()) * r));
    }
  }
}

TEST_CASE("Williamson 5 mountain sits on the steady surface") {
  const TestCase tc = make_case(CaseId::W5);
  const SphericalPoint<double> apex{tc.parameters().lon_c, tc.parameters().lat_c};
  CHECK(std::abs(tc.topography(apex) - 2000) < 1e-9);
  CHECK(tc.topography({0.5, -0.5}) == 0);
  for (int i = 0; i < 100; ++i) {
    const SphericalPoint<double> s = random_point();
    const SphericalState<double> w = tc.initial(s);
    CHECK(w.h > 0);
    const double u0 = 20, g = tc.constants().g, om = tc.constants().omega, r = tc.constants().radius;
    const double surface = 5960 - (r * om * u0 + u0 * u0 / 2) * std::sin(s.lat) * std::sin(s.lat) / g;
    CHECK(std::abs(w.h + tc.topography(s) - surface) < 1e-9);
  }
}

TEST_CASE("Deform angular velocity and its series branch") {
  const TestCase tc = make_case(CaseId::Deform);
  const double u0 = tc.parameters().u0;
  // Towards the pole ω tends to (3√3/2)u₀; the flow speed Rω cos η still vanishes there.
  CHECK(test::rel_err(tc.deform_omega(kPi<double> / 2 - 1e-9), 1.5 * std::sqrt(3.0) * u0) < 1e-12);
  // ω = (3√3/2) u₀ tanh ρ sech²ρ / ρ on both sides of the series switch.
  for (double lat : {0.0, 0.3, 1.2, std::acos(0.9e-3 / 3), std::acos(1.1e-3 / 3)}) {
    const double rho = 3 * std::cos(lat);
    const double want = 1.5 * std::sqrt(3.0) * u0 * std::tanh(rho) / (rho * std::cosh(rho) * std::cosh(rho));
    CHECK(test::rel_err(tc.deform_omega(lat), want) < 1e-11);
  }
}

TEST_CASE("Rossby-Haurwitz and cross-polar states are positive and finite") {
  for (CaseId id : {CaseId::RH4, CaseId::CrossPolar}) {
    const TestCase tc = make_case(id);
    for (int i = 0; i < 200; ++i) {
      const SphericalState<double> w = tc.initial(random_point(1.57));
      CHECK(w.h > 0);
      CHECK(std::isfinite(w.u));
      CHECK(std::isfinite(w.v));
    }
    CHECK_THROWS_AS((void)tc.exact({0, 0}, 0), Error);
  }
}

TEST_CASE("unperturbed Galewsky jet is in gradient-wind balance") {
  const TestCase base = make_case(CaseId::Galewsky);
  CaseParameters p = base.parameters();
  p.perturb = false;
  const TestCase tc(CaseId::Galewsky, base.constants(), p);
  const double g = tc.constants().g, r = tc.constants().radius, dx = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const SphericalPoint<double> s = random_point(1.5);
    const SphericalState<double> w = tc.initial(s);
    CHECK(w.h > 0);
    CHECK(w.v == 0);
    const double h_y = (tc.initial({s.lon, s.lat + dx}).h - tc.initial({s.lon, s.lat - dx}).h) / (2 * dx);
    const double f = coriolis(s, tc.constants()) + w.u * std::tan(s.lat) / r;
    const double scale = std::max(std::abs(f * w.u), 1e-12);
    CHECK(std::abs(f * w.u + g * h_y / r) <= 1e-5 * scale + 1e-12);
  }
  // The jet peaks at u_max midway between its edges and vanishes outside.
  CHECK(base.galewsky_jet(kPi<double> / 4) == doctest::Approx(80).epsilon(1e-12));
  CHECK(base.galewsky_jet(0.1) == 0);
  CHECK(base.galewsky_jet(1.5) == 0);
}

TEST_CASE("Galewsky perturbation adds the published bump") {
  const TestCase tc = make_case(CaseId::Galewsky);
  const double lat2 = kPi<double> / 4;
  CaseParameters p = tc.parameters();
  p.perturb = false;
  const TestCase flat(CaseId::Galewsky, tc.constants(), p);
  const SphericalPoint<double> at{0, lat2};
  CHECK(tc.initial(at).h - flat.initial(at).h == doctest::Approx(120 * std::cos(lat2)).epsilon(1e-12));
}
