#include "doctest.h"
#include "swe/simulation.hpp"

#include <cmath>

using namespace swe;

namespace {

// y′ = −y + cos t, y(0) = 1 has y = ½(cos t + sin t) + ½e^{−t}.
double ode_error(Scheme scheme, int steps) {
  const double dt = 1.0 / steps;
  double y = 1, t = 0;
  auto rhs = [](double v, double time) { return -v + std::cos(time); };
  for (int i = 0; i < steps; ++i, t += dt) y = rk_step(y, dt, t, scheme, rhs);
  return std::abs(y - (0.5 * (std::cos(1.0) + std::sin(1.0)) + 0.5 * std::exp(-1.0)));
}

}  // namespace

TEST_CASE("each scheme attains its order on a non-autonomous ODE") {
  const std::pair<Scheme, int> expected[] = {{Scheme::SspRk2, 2}, {Scheme::SspRk3, 3}, {Scheme::Rk4, 4}};
  for (const auto& [scheme, order] : expected) {
    const double e1 = ode_error(scheme, 20), e2 = ode_error(scheme, 40);
    CHECK(std::log2(e1 / e2) == doctest::Approx(order).epsilon(0.08));
  }
}

TEST_CASE("scheme names and defaults") {
  for (Scheme s : {Scheme::SspRk2, Scheme::SspRk3, Scheme::Rk4}) CHECK(parse_scheme(to_string(s)) == s);
  CHECK_THROWS_AS(parse_scheme("euler"), Error);
  CHECK(default_scheme(1) == Scheme::SspRk2);
  CHECK(default_scheme(2) == Scheme::SspRk3);
  CHECK(default_scheme(3) == Scheme::Rk4);
  CHECK(default_cfl(1) == 0.25);
  CHECK(default_cfl(2) == 0.15);
  CHECK(default_cfl(3) == 0.1);
}

TEST_CASE("advance lands exactly on the end time and observes the last step") {
  RunConfig c;
  c.degree = 1;
  c.n = 3;
  const Simulation sim(c);
  TimeConfig<double> tc = sim.time_config();
  const double dt = cfl_timestep(sim.solver(), sim.initial(), tc.cfl);
  tc.t_end = 2.5 * dt;
  std::vector<std::pair<double, int>> seen;
  const AdvanceResult<double> r = advance<double>(
      sim.solver(), sim.initial(), 0.0, tc, FluxMode::Leg,
      [&](const DGField<double>&, double t, int step) { seen.emplace_back(t, step); }, 2);
  CHECK(r.t == tc.t_end);
  CHECK(r.steps == 3);
  REQUIRE(seen.size() == 3);
  CHECK(seen[0] == std::pair{0.0, 0});
  CHECK(seen[1].second == 2);
  CHECK(seen[2] == std::pair{tc.t_end, 3});
}

TEST_CASE("fixed step overrides the CFL step") {
  RunConfig c;
  c.n = 2;
  const Simulation sim(c);
  TimeConfig<double> tc = sim.time_config();
  tc.fixed_dt = 10.0;
  tc.t_end = 100.0;
  CHECK(advance(sim.solver(), sim.initial(), 0.0, tc, FluxMode::Leg).steps == 10);
}

TEST_CASE("runs are bitwise reproducible") {
  RunConfig c;
  c.case_id = CaseId::Galewsky;
  c.degree = 2;
  c.n = 3;
  c.t_end_days = 0.02;
  const Simulation a(c), b(c);
  const AdvanceResult<double> ra = a.run(), rb = b.run();
  CHECK(ra.steps == rb.steps);
  CHECK((ra.field.coeffs.array() == rb.field.coeffs.array()).all());
}

TEST_CASE("CFL step scales inversely with resolution") {
  RunConfig c;
  c.n = 4;
  const Simulation a(c);
  c.n = 8;
  const Simulation b(c);
  const double ra = cfl_timestep(a.solver(), a.initial(), 0.25), rb = cfl_timestep(b.solver(), b.initial(), 0.25);
  CHECK(ra / rb == doctest::Approx(2).epsilon(0.1));
}
