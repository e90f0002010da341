// Command-line driver: run, convergence, verify, plotdata.
// Exit codes: 0 success, 1 usage error, 2 numerical or I/O failure.

#include "CLI11.hpp"
#include "swe/checks.hpp"
#include "swe/config.hpp"
#include "swe/io.hpp"
#include "swe/simulation.hpp"

#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace swe;

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

// Replaces `--config PATH` (or --config=PATH) by the file's flags, ahead of the
// remaining command-line flags so that those take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (size_t i = 0; i < args.size(); ++i) {
    std::string path;
    size_t consumed = 0;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) raise(ErrorKind::Usage, "--config needs a file path");
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      consumed = 1;
    } else {
      continue;
    }
    std::vector<std::string> from_file = read_config_arguments(path);
    args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i + consumed));
    // Insert right after the subcommand name.
    size_t at = 0;
    while (at < args.size() && args[at].rfind("-", 0) == 0) ++at;
    at = std::min(at + 1, args.size());
    args.insert(args.begin() + static_cast<long>(at), from_file.begin(), from_file.end());
    return args;
  }
  return args;
}

struct RunOptions {
  std::string case_name = "w2";
  int degree = 1;
  int n = 8;
  std::string flux = "leg";
  std::optional<double> cfl;
  std::string scheme;
  std::optional<double> t_end_days;
  int sample_every = 0;
  int norm_oversample = 1;
  std::string out_dir = ".";
  int latlon_m = 90;
  std::vector<std::string> overrides;
  std::string ns = "16,32,64";
  int samples = 1000;
  std::string field_path;
  std::string out_path;
  std::string config_path;  ///< expanded before parsing; listed for --help
};

void add_case_options(CLI::App* app, RunOptions& o) {
  app->add_option("--case", o.case_name, "w2, lauter, w5, deform, rh4, crosspolar or galewsky");
  app->add_option("--degree,-K", o.degree, "polynomial degree K (1-3)");
  app->add_option("--flux", o.flux, "interface flux: leg or baseline");
  app->add_option("--cfl", o.cfl, "Courant number (default by degree)");
  app->add_option("--scheme", o.scheme, "ssp-rk2, ssp-rk3 or rk4 (default by degree)");
  app->add_option("--t-end-days", o.t_end_days, "simulated days");
  app->add_option("--norm-oversample", o.norm_oversample, "finer error quadrature factor");
  app->add_option("--set", o.overrides, "case parameter override name=value (h0, u0, alpha, g, radius, omega, ...)");
  app->add_option("--config", o.config_path, "key = value file equivalent to the flags");
}

double default_days(CaseId id) {
  switch (id) {
    case CaseId::W2: return 3;
    case CaseId::W5: return 15;
    case CaseId::RH4: return 7;
    default: return 1;
  }
}

RunConfig to_config(const RunOptions& o) {
  RunConfig c;
  c.case_id = parse_case(o.case_name);
  c.degree = o.degree;
  c.n = o.n;
  c.flux = parse_flux(o.flux);
  c.cfl = o.cfl;
  if (!o.scheme.empty()) c.scheme = parse_scheme(o.scheme);
  c.t_end_days = o.t_end_days.value_or(default_days(c.case_id));
  c.sample_every = o.sample_every;
  c.norm_oversample = o.norm_oversample;
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) raise(ErrorKind::Usage, "--set expects name=value, got '" + kv + "'");
    try {
      c.overrides[kv.substr(0, eq)] = parse_double(kv.substr(eq + 1));
    } catch (const Error&) {
      raise(ErrorKind::Usage, "--set value is not a number: '" + kv + "'");
    }
  }
  return c;
}

std::string path_in(const std::string& dir, const char* name) { return (std::filesystem::path(dir) / name).string(); }

int run_command(const RunOptions& o) {
  const RunConfig config = to_config(o);
  std::filesystem::create_directories(o.out_dir);
  const Simulation sim(config);
  std::vector<Sample> samples;
  const AdvanceResult<double> r = sim.run([&](const Sample& s, const DGField<double>&) { samples.push_back(s); });
  write_norms_csv(path_in(o.out_dir, "norms.csv"), samples);
  write_grid_csv(path_in(o.out_dir, "grid.csv"), grid_rows(sim.solver(), r.field));
  write_latlon_csv(path_in(o.out_dir, "latlon.csv"), latlon_rows(sim.solver(), r.field, o.latlon_m));
  write_field_json(path_in(o.out_dir, "field.json"), {config, r.t, r.steps, r.field});
  const Sample& last = samples.back();
  std::printf("%s K=%d N=%d flux=%s: %d steps to %.6g days, mass drift %.3e, energy drift %.3e\n",
              to_string(config.case_id), config.degree, config.n, to_string(config.flux), r.steps,
              r.t / kSecondsPerDay, (last.conserved.mass - samples.front().conserved.mass) / samples.front().conserved.mass,
              (last.conserved.energy - samples.front().conserved.energy) / samples.front().conserved.energy);
  if (last.errors)
    std::printf("relative h errors: l1 %.4e  l2 %.4e  linf %.4e\n", last.errors->h.l1, last.errors->h.l2,
                last.errors->h.linf);
  return 0;
}

std::vector<int> parse_ns(const std::string& text) {
  std::vector<int> ns;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      ns.push_back(std::stoi(item, &used));
      if (used != item.size() || ns.back() < 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      raise(ErrorKind::Usage, "--ns expects a comma-separated list of positive integers, got '" + text + "'");
    }
  }
  if (ns.empty()) raise(ErrorKind::Usage, "--ns is empty");
  return ns;
}

int convergence_command(const RunOptions& o) {
  const RunConfig config = to_config(o);
  const std::vector<int> ns = parse_ns(o.ns);
  std::printf("%s K=%d flux=%s t=%.6g days: relative errors in h\n", to_string(config.case_id), config.degree,
              to_string(config.flux), config.t_end_days);
  std::printf("%6s %14s %8s %14s %8s %14s %8s\n", "N", "l1", "order", "l2", "order", "linf", "order");
  std::vector<ConvergenceRow> rows;
  for (const int n : ns) {
    const ConvergenceRow row = convergence_study(config, {n}).front();
    auto order = [&](double ErrorNorms::*q) {
      return rows.empty() ? std::string("-")
                          : (std::ostringstream() << std::fixed << std::setprecision(4)
                                                  << observed_order(rows.back().errors.h.*q, row.errors.h.*q,
                                                                    rows.back().n, row.n))
                                .str();
    };
    std::printf("%6d %14.4e %8s %14.4e %8s %14.4e %8s\n", n, row.errors.h.l1, order(&ErrorNorms::l1).c_str(),
                row.errors.h.l2, order(&ErrorNorms::l2).c_str(), row.errors.h.linf, order(&ErrorNorms::linf).c_str());
    std::fflush(stdout);
    rows.push_back(row);
  }
  return 0;
}

int verify_command(const RunOptions& o) {
  if (o.samples < 1) raise(ErrorKind::Usage, "--samples must be positive");
  bool ok = true;
  for (const CheckResult& r : property_suite(o.samples)) {
    std::printf("%s  %-58s max %.3e  tol %.0e  (%d samples)\n", r.passed() ? "PASS" : "FAIL", r.name.c_str(),
                r.measured, r.tolerance, r.samples);
    ok = ok && r.passed();
  }
  return ok ? 0 : kExitFailure;
}

int plotdata_command(const RunOptions& o) {
  const StoredField stored = read_field_json(o.field_path);
  const Simulation sim(stored.config);
  const std::string out = o.out_path.empty() ? (std::filesystem::path(o.field_path).parent_path() / "latlon.csv").string()
                                             : o.out_path;
  write_latlon_csv(out, latlon_rows(sim.solver(), stored.field, o.latlon_m));
  std::printf("wrote %s (%d x %d raster at t = %.6g days)\n", out.c_str(), o.latlon_m, 2 * o.latlon_m,
              stored.t / kSecondsPerDay);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RKDG shallow-water solver on the cubed sphere with local evolution Galerkin fluxes"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  RunOptions o;

  CLI::App* run = app.add_subcommand("run", "integrate one case and export diagnostics");
  add_case_options(run, o);
  run->add_option("--n,-N", o.n, "cells per panel edge");
  run->add_option("--out-dir", o.out_dir, "directory for norms.csv, grid.csv, latlon.csv, field.json");
  run->add_option("--sample-every", o.sample_every, "diagnostic sampling interval in steps (0: first and last)");
  run->add_option("--latlon-m", o.latlon_m, "latitudes of the exported raster");

  CLI::App* conv = app.add_subcommand("convergence", "error table and observed orders over resolutions");
  add_case_options(conv, o);
  conv->add_option("--ns", o.ns, "comma-separated resolutions");

  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--samples", o.samples, "random samples per suite");
  verify->add_option("--config", o.config_path, "key = value file equivalent to the flags");

  CLI::App* plot = app.add_subcommand("plotdata", "re-export a stored field to latlon-csv");
  plot->add_option("--field", o.field_path, "field.json written by run")->required();
  plot->add_option("--out", o.out_path, "output CSV (default: latlon.csv next to the field)");
  plot->add_option("--latlon-m", o.latlon_m, "latitudes of the raster");
  plot->add_option("--config", o.config_path, "key = value file equivalent to the flags");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());  // CLI11 consumes vectors from the back
    app.parse(args);
    if (run->parsed()) return run_command(o);
    if (conv->parsed()) return convergence_command(o);
    if (verify->parsed()) return verify_command(o);
    return plotdata_command(o);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    if (e.kind() == ErrorKind::Usage) std::cerr << "Run with --help for usage.\n";
    return e.kind() == ErrorKind::Usage ? kExitUsage : kExitFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error (Io): " << e.what() << '\n';
    return kExitFailure;
  }
}
