#pragma once

// One configured benchmark run: case, mesh, solver and initial field, plus the
// sampled diagnostics shared by the command-line tool and the acceptance suite.

#include "swe/diagnostics.hpp"
#include "swe/testcases.hpp"
#include "swe/time_integration.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace swe {

FluxMode parse_flux(const std::string& name);
const char* to_string(FluxMode mode) noexcept;

struct RunConfig {
  CaseId case_id = CaseId::W2;
  int degree = 1;
  int n = 8;
  FluxMode flux = FluxMode::Leg;
  std::optional<double> cfl;       ///< default by degree
  std::optional<Scheme> scheme;    ///< default by degree
  double t_end_days = 1;
  int sample_every = 0;            ///< 0 samples only the first and last step
  int norm_oversample = 1;
  /// Case parameter and physical constant overrides by name (h0, u0, alpha, g, radius, omega, ...).
  std::map<std::string, double> overrides;
};

/// Case with the published parameters and the overrides applied; unknown names raise Usage.
TestCase configured_case(const RunConfig& config);

struct Sample {
  int step = 0;
  double t = 0;
  std::optional<FieldErrors> errors;  ///< only for cases with an exact solution
  Conserved conserved;
};

class Simulation {
 public:
  explicit Simulation(const RunConfig& config);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  [[nodiscard]] const RunConfig& config() const { return config_; }
  [[nodiscard]] const TestCase& test_case() const { return case_; }
  [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
  [[nodiscard]] const DGSolver<double>& solver() const { return *solver_; }
  [[nodiscard]] const DGField<double>& initial() const { return initial_; }
  [[nodiscard]] TimeConfig<double> time_config() const;

  [[nodiscard]] Sample sample(const DGField<double>& field, double t, int step) const;

  using SampleObserver = std::function<void(const Sample&, const DGField<double>&)>;
  /// Advances from t = 0 to the configured end time, sampling per the configuration.
  AdvanceResult<double> run(const SampleObserver& observe = {}) const;

 private:
  RunConfig config_;
  TestCase case_;
  std::unique_ptr<Mesh> mesh_;
  std::unique_ptr<DGSolver<double>> solver_;
  DGField<double> initial_;
};

struct ConvergenceRow {
  int n = 0;
  int steps = 0;
  FieldErrors errors;
};

/// Errors at the final time for each resolution in `ns`.
std::vector<ConvergenceRow> convergence_study(RunConfig config, const std::vector<int>& ns);

/// Observed order log(e_coarse/e_fine)/log(n_fine/n_coarse).
double observed_order(double e_coarse, double e_fine, int n_coarse, int n_fine);

}  // namespace swe
