#pragma once

// Text exports: per-node grid CSV, longitude/latitude raster CSV, diagnostic
// time-series CSV and a JSON field store. Floats carry 17 significant digits,
// so every double survives a write/read round trip exactly.

#include "swe/simulation.hpp"

#include <string>
#include <vector>

namespace swe {

std::string format_double(double v);
/// Strict decimal parse; raises Io naming the text on failure.
double parse_double(const std::string& text);

struct GridRow {
  int panel = 1, j = 0, k = 0;
  double x = 0, y = 0, lon = 0, lat = 0, h = 0, u_s = 0, v_s = 0, vorticity = 0;
};

inline constexpr const char* kGridHeader = "panel,j,k,x,y,ξ,η,h,u_s,v_s,ς";
inline constexpr const char* kLatLonHeader = "η,ξ,h,h_plus_b,u_s,v_s,ς";

/// One row per volume quadrature node, cells in solver order.
std::vector<GridRow> grid_rows(const DGSolver<double>& solver, const DGField<double>& field);
void write_grid_csv(const std::string& path, const std::vector<GridRow>& rows);
std::vector<GridRow> read_grid_csv(const std::string& path);

struct LatLonRow {
  double lat = 0, lon = 0, h = 0, surface = 0, u_s = 0, v_s = 0, vorticity = 0;
};

/// Raster latitudes η_i = −π/2 + iπ/(M−1), i < M, and longitudes ξ_j = −π + jπ/M, j < 2M;
/// latitude-major order.
std::vector<SphericalPoint<double>> latlon_raster(int m);
/// Samples the field by locating each raster point's cell and evaluating its polynomials.
std::vector<LatLonRow> latlon_rows(const DGSolver<double>& solver, const DGField<double>& field, int m);
void write_latlon_csv(const std::string& path, const std::vector<LatLonRow>& rows);

/// Columns: step, times, (h, u, v) × (l1, l2, l∞) errors (nan without an exact solution),
/// conserved integrals and their drifts relative to the first sample.
std::string norms_header();
void write_norms_csv(const std::string& path, const std::vector<Sample>& samples);

/// Column name → values, for reading back any of the CSV formats.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  [[nodiscard]] int column(const std::string& name) const;  ///< raises Io when missing
};
CsvTable read_csv(const std::string& path);

/// Run description and coefficients, enough to rebuild the solver and re-export.
struct StoredField {
  RunConfig config;
  double t = 0;
  int steps = 0;
  DGField<double> field;
};
void write_field_json(const std::string& path, const StoredField& stored);
StoredField read_field_json(const std::string& path);

}  // namespace swe
