#include "swe/simulation.hpp"

#include <cmath>

namespace swe {

FluxMode parse_flux(const std::string& name) {
  if (name == "leg") return FluxMode::Leg;
  if (name == "baseline") return FluxMode::Baseline;
  raise(ErrorKind::Usage, "unknown flux '" + name + "' (expected leg or baseline)");
}

const char* to_string(FluxMode mode) noexcept { return mode == FluxMode::Leg ? "leg" : "baseline"; }

TestCase configured_case(const RunConfig& config) {
  const TestCase published = make_case(config.case_id);
  PhysicalConstants<double> pc = published.constants();
  CaseParameters p = published.parameters();
  const std::map<std::string, double*> slots{
      {"g", &pc.g},           {"radius", &pc.radius}, {"omega", &pc.omega},   {"h0", &p.h0},
      {"u0", &p.u0},          {"alpha", &p.alpha},    {"k1", &p.k1},          {"k2", &p.k2},
      {"b0", &p.b0},          {"r0", &p.r0},          {"lon_c", &p.lon_c},    {"lat_c", &p.lat_c},
      {"rho0", &p.rho0},      {"gamma", &p.gamma},    {"rh_k", &p.rh_k},      {"lat0", &p.lat0},
      {"lat1", &p.lat1},      {"h_hat", &p.h_hat},    {"g_alpha", &p.g_alpha}, {"g_beta", &p.g_beta},
      {"lat2", &p.lat2}};
  for (const auto& [name, value] : config.overrides) {
    const auto it = slots.find(name);
    if (it == slots.end()) raise(ErrorKind::Usage, "unknown case parameter '" + name + "'");
    *it->second = value;
  }
  return TestCase(config.case_id, pc, p);
}

Simulation::Simulation(const RunConfig& config)
    : config_(config), case_(configured_case(config)), mesh_(std::make_unique<Mesh>(config.n)) {
  if (config.n < 1) raise(ErrorKind::Usage, "cells per panel edge must be positive");
  if (config.t_end_days < 0) raise(ErrorKind::Usage, "end time must not be negative");
  if (config.sample_every < 0) raise(ErrorKind::Usage, "sampling interval must not be negative");
  const TestCase& tc = case_;
  const double href = area_mean(*mesh_, tc.constants().radius,
                                [&tc](const SphericalPoint<double>& s) { return tc.initial(s).h; });
  solver_ = std::make_unique<DGSolver<double>>(*mesh_, config.degree, tc.problem(href));
  initial_ = solver_->project([&tc](const SphericalPoint<double>& s) { return tc.initial(s); });
}

TimeConfig<double> Simulation::time_config() const {
  TimeConfig<double> tc;
  tc.cfl = config_.cfl.value_or(default_cfl(config_.degree));
  tc.scheme = config_.scheme.value_or(default_scheme(config_.degree));
  tc.t_end = config_.t_end_days * kSecondsPerDay;
  if (!(tc.cfl > 0)) raise(ErrorKind::Usage, "CFL number must be positive");
  return tc;
}

Sample Simulation::sample(const DGField<double>& field, double t, int step) const {
  Sample s;
  s.step = step;
  s.t = t;
  s.conserved = conserved(*solver_, field);
  if (case_.has_exact()) {
    const TestCase& tc = case_;
    s.errors = relative_errors(
        *solver_, field, [&tc, t](const SphericalPoint<double>& p) { return tc.exact(p, t); },
        config_.norm_oversample);
  }
  return s;
}

AdvanceResult<double> Simulation::run(const SampleObserver& observe) const {
  StepObserver<double> step_observer;
  if (observe)
    step_observer = [&](const DGField<double>& f, double t, int step) { observe(sample(f, t, step), f); };
  return advance(*solver_, initial_, 0.0, time_config(), config_.flux, step_observer, config_.sample_every);
}

std::vector<ConvergenceRow> convergence_study(RunConfig config, const std::vector<int>& ns) {
  std::vector<ConvergenceRow> rows;
  for (const int n : ns) {
    config.n = n;
    const Simulation sim(config);
    if (!sim.test_case().has_exact())
      raise(ErrorKind::NoExactSolution, std::string("case ") + to_string(config.case_id) + " has no exact solution");
    const AdvanceResult<double> r = sim.run();
    rows.push_back({n, r.steps, *sim.sample(r.field, r.t, r.steps).errors});
  }
  return rows;
}

double observed_order(double e_coarse, double e_fine, int n_coarse, int n_fine) {
  return std::log(e_coarse / e_fine) / std::log(static_cast<double>(n_fine) / n_coarse);
}

}  // namespace swe
