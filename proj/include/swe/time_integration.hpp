#pragma once

// Explicit Runge–Kutta drivers for the semi-discrete DG system.

#include "swe/dg_solver.hpp"

#include <functional>
#include <optional>
#include <string>

namespace swe {

enum class Scheme { SspRk2, SspRk3, Rk4 };

Scheme default_scheme(int degree);
double default_cfl(int degree);
Scheme parse_scheme(const std::string& name);
const char* to_string(Scheme s) noexcept;

template <std::floating_point Scalar>
struct TimeConfig {
  Scalar cfl = Scalar(0.25);
  Scheme scheme = Scheme::SspRk2;
  Scalar t_end = 0;
  std::optional<Scalar> fixed_dt;  ///< overrides the CFL step when set
};

/// Δt = πC / (2N · rate), rate from DGSolver::wave_rate.
template <std::floating_point Scalar>
Scalar cfl_timestep(const DGSolver<Scalar>& solver, const DGField<Scalar>& field, Scalar cfl) {
  const Scalar rate = solver.wave_rate(field);
  if (!(rate > 0)) raise(ErrorKind::NonPositiveDepth, "wave speed must be positive");
  return kPi<Scalar> * cfl / (2 * solver.mesh().n() * rate);
}

/// One step of u′ = L(u, t) for any state type with vector-space arithmetic.
template <class State, std::floating_point Scalar, class Rhs>
State rk_step(const State& u, Scalar dt, Scalar t, Scheme scheme, const Rhs& rhs) {
  switch (scheme) {
    case Scheme::SspRk2: {
      const State u1 = u + dt * rhs(u, t);
      return Scalar(0.5) * u + Scalar(0.5) * (u1 + dt * rhs(u1, t + dt));
    }
    case Scheme::SspRk3: {
      const State u1 = u + dt * rhs(u, t);
      const State u2 = Scalar(0.75) * u + Scalar(0.25) * (u1 + dt * rhs(u1, t + dt));
      return u / Scalar(3) + (Scalar(2) / Scalar(3)) * (u2 + dt * rhs(u2, t + dt / 2));
    }
    case Scheme::Rk4: {
      const State k1 = rhs(u, t);
      const State k2 = rhs(State(u + (dt / 2) * k1), t + dt / 2);
      const State k3 = rhs(State(u + (dt / 2) * k2), t + dt / 2);
      const State k4 = rhs(State(u + dt * k3), t + dt);
      return u + (dt / 6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
    }
  }
  raise(ErrorKind::Usage, "unknown time scheme");
}

template <std::floating_point Scalar>
DGField<Scalar> step(const DGSolver<Scalar>& solver, const DGField<Scalar>& field, Scalar dt, Scalar t, Scheme scheme,
                     FluxMode mode) {
  DGField<Scalar> work = solver.zero_field();
  DGField<Scalar> rate = solver.zero_field();
  auto rhs = [&](const CoeffMatrix<Scalar>& c, Scalar time) -> CoeffMatrix<Scalar> {
    work.coeffs = c;
    solver.residual(work, time, mode, rate);
    return rate.coeffs;
  };
  DGField<Scalar> out;
  out.degree = field.degree;
  out.coeffs = rk_step(field.coeffs, dt, t, scheme, rhs);
  return out;
}

template <std::floating_point Scalar>
struct AdvanceResult {
  DGField<Scalar> field;
  Scalar t = 0;
  int steps = 0;
};

/// Observer called at t₀, every `sample_every` steps and at the final time.
template <std::floating_point Scalar>
using StepObserver = std::function<void(const DGField<Scalar>&, Scalar t, int step)>;

template <std::floating_point Scalar>
AdvanceResult<Scalar> advance(const DGSolver<Scalar>& solver, DGField<Scalar> field, Scalar t0,
                              const TimeConfig<Scalar>& config, FluxMode mode, const StepObserver<Scalar>& observe = {},
                              int sample_every = 0) {
  AdvanceResult<Scalar> r{std::move(field), t0, 0};
  if (observe) observe(r.field, r.t, 0);
  const Scalar t_end = t0 + config.t_end;
  bool observed_last = true;
  while (r.t < t_end) {
    Scalar dt = config.fixed_dt ? *config.fixed_dt : cfl_timestep(solver, r.field, config.cfl);
    // Clamp rather than overshoot; absorb a final sliver below 1e-12 of a step.
    const bool last = r.t + dt * (1 + Scalar(1e-12)) >= t_end;
    if (last) dt = t_end - r.t;
    r.field = step(solver, r.field, dt, r.t, config.scheme, mode);
    r.t = last ? t_end : r.t + dt;
    ++r.steps;
    observed_last = false;
    if (observe && sample_every > 0 && r.steps % sample_every == 0) {
      observe(r.field, r.t, r.steps);
      observed_last = true;
    }
  }
  if (observe && !observed_last) observe(r.field, r.t, r.steps);
  return r;
}

}  // namespace swe
