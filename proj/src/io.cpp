#include "swe/io.hpp"

#include "json.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace swe {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::Io, "cannot open '" + path + "' for writing: " + std::strerror(errno));
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::Io, "cannot open '" + path + "' for reading: " + std::strerror(errno));
  return in;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) raise(ErrorKind::Io, "write to '" + path + "' failed: " + std::strerror(errno));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

int parse_int(const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) raise(ErrorKind::Io, "not an integer: '" + text + "'");
  return v;
}

template <class Row>
void write_rows(const std::string& path, const char* header, const std::vector<Row>& rows,
                const std::function<std::string(const Row&)>& format) {
  std::ofstream out = open_out(path);
  out << header << '\n';
  for (const Row& r : rows) out << format(r) << '\n';
  finish(out, path);
}

std::string join(std::initializer_list<std::string> cells) {
  std::string s;
  for (const std::string& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) raise(ErrorKind::Io, "not a number: '" + text + "'");
  return v;
}

std::vector<GridRow> grid_rows(const DGSolver<double>& solver, const DGField<double>& field) {
  const Mesh& mesh = solver.mesh();
  std::vector<GridRow> rows;
  rows.reserve(static_cast<size_t>(mesh.cells()) * solver.volume_nodes());
  for (int c = 0; c < mesh.cells(); ++c) {
    const CellId id = mesh.cell(c);
    for (int q = 0; q < solver.volume_nodes(); ++q) {
      const PanelPoint<double> p = solver.node_point(c, q);
      const SphericalPoint<double> s = solver.node_sphere(c, q);
      const SphericalState<double> w = solver.node_spherical(field, c, q);
      rows.push_back({id.panel, id.j, id.k, p.x, p.y, s.lon, s.lat, w.h, w.u, w.v,
                      vorticity(solver, field, c, solver.node_coords(q))});
    }
  }
  return rows;
}

void write_grid_csv(const std::string& path, const std::vector<GridRow>& rows) {
  write_rows<GridRow>(path, kGridHeader, rows, [](const GridRow& r) {
    return join({std::to_string(r.panel), std::to_string(r.j), std::to_string(r.k), format_double(r.x),
                 format_double(r.y), format_double(r.lon), format_double(r.lat), format_double(r.h),
                 format_double(r.u_s), format_double(r.v_s), format_double(r.vorticity)});
  });
}

std::vector<GridRow> read_grid_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::vector<std::string> names = split_line(kGridHeader);
  std::vector<int> col;
  for (const std::string& n : names) col.push_back(t.column(n));
  std::vector<GridRow> rows;
  rows.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    auto d = [&](int i) { return parse_double(r[col[i]]); };
    rows.push_back({parse_int(r[col[0]]), parse_int(r[col[1]]), parse_int(r[col[2]]), d(3), d(4), d(5), d(6), d(7),
                    d(8), d(9), d(10)});
  }
  return rows;
}

std::vector<SphericalPoint<double>> latlon_raster(int m) {
  if (m < 2) raise(ErrorKind::Usage, "raster needs at least two latitudes");
  std::vector<SphericalPoint<double>> pts;
  pts.reserve(static_cast<size_t>(2) * m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < 2 * m; ++j)
      pts.push_back({-kPi<double> + j * kPi<double> / m, -kPi<double> / 2 + i * kPi<double> / (m - 1)});
  return pts;
}

std::vector<LatLonRow> latlon_rows(const DGSolver<double>& solver, const DGField<double>& field, int m) {
  const std::vector<SphericalPoint<double>> pts = latlon_raster(m);
  std::vector<LatLonRow> rows;
  rows.reserve(pts.size());
  for (const SphericalPoint<double>& s : pts) {
    Vec2<double> st;
    const int cell = solver.locate(s, st);
    const SphericalState<double> w = solver.evaluate(field, cell, st);
    const double b = solver.bottom(cell, st);
    rows.push_back({s.lat, s.lon, w.h, w.h + b, w.u, w.v, vorticity(solver, field, cell, st)});
  }
  return rows;
}

void write_latlon_csv(const std::string& path, const std::vector<LatLonRow>& rows) {
  write_rows<LatLonRow>(path, kLatLonHeader, rows, [](const LatLonRow& r) {
    return join({format_double(r.lat), format_double(r.lon), format_double(r.h), format_double(r.surface),
                 format_double(r.u_s), format_double(r.v_s), format_double(r.vorticity)});
  });
}

std::string norms_header() {
  std::string h = "step,time_s,time_days";
  for (const char* q : {"h", "u", "v"})
    for (const char* n : {"l1", "l2", "linf"}) h += std::string(",") + q + "_" + n;
  return h + ",mass,energy,enstrophy,mass_drift,energy_drift,enstrophy_drift";
}

void write_norms_csv(const std::string& path, const std::vector<Sample>& samples) {
  std::ofstream out = open_out(path);
  out << norms_header() << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const Sample& s : samples) {
    const Conserved& c0 = samples.front().conserved;
    std::string row = std::to_string(s.step) + ',' + format_double(s.t) + ',' + format_double(s.t / kSecondsPerDay);
    for (const ErrorNorms* e : {s.errors ? &s.errors->h : nullptr, s.errors ? &s.errors->u : nullptr,
                                s.errors ? &s.errors->v : nullptr})
      for (const double v : {e ? e->l1 : nan, e ? e->l2 : nan, e ? e->linf : nan}) row += ',' + format_double(v);
    const Conserved& c = s.conserved;
    for (const double v : {c.mass, c.energy, c.enstrophy, (c.mass - c0.mass) / c0.mass,
                           (c.energy - c0.energy) / c0.energy, (c.enstrophy - c0.enstrophy) / c0.enstrophy})
      row += ',' + format_double(v);
    out << row << '\n';
  }
  finish(out, path);
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  raise(ErrorKind::Io, "missing column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) raise(ErrorKind::Io, "'" + path + "' has no header row");
  t.header = split_line(line);
  for (int number = 2; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    t.rows.push_back(split_line(line));
    if (t.rows.back().size() != t.header.size())
      raise(ErrorKind::Io, path + ":" + std::to_string(number) + ": expected " + std::to_string(t.header.size()) +
                               " fields, found " + std::to_string(t.rows.back().size()));
  }
  return t;
}

void write_field_json(const std::string& path, const StoredField& stored) {
  const RunConfig& c = stored.config;
  nlohmann::json j;
  j["case"] = to_string(c.case_id);
  j["degree"] = c.degree;
  j["n"] = c.n;
  j["flux"] = to_string(c.flux);
  j["t_end_days"] = c.t_end_days;
  j["overrides"] = c.overrides;
  j["time"] = stored.t;
  j["steps"] = stored.steps;
  j["rows"] = stored.field.coeffs.rows();
  j["cols"] = stored.field.coeffs.cols();
  j["coefficients"] = std::vector<double>(stored.field.coeffs.data(),
                                          stored.field.coeffs.data() + stored.field.coeffs.size());
  std::ofstream out = open_out(path);
  out << j.dump() << '\n';
  finish(out, path);
}

StoredField read_field_json(const std::string& path) {
  std::ifstream in = open_in(path);
  StoredField s;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    s.config.case_id = parse_case(j.at("case").get<std::string>());
    s.config.degree = j.at("degree").get<int>();
    s.config.n = j.at("n").get<int>();
    s.config.flux = parse_flux(j.at("flux").get<std::string>());
    s.config.t_end_days = j.at("t_end_days").get<double>();
    s.config.overrides = j.at("overrides").get<std::map<std::string, double>>();
    s.t = j.at("time").get<double>();
    s.steps = j.at("steps").get<int>();
    const auto values = j.at("coefficients").get<std::vector<double>>();
    const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
    if (static_cast<Eigen::Index>(values.size()) != rows * cols || rows != 3 * basis_size(s.config.degree) ||
        cols != 6 * s.config.n * s.config.n)
      raise(ErrorKind::Io, "'" + path + "': coefficient array does not match degree and resolution");
    s.field.degree = s.config.degree;
    s.field.coeffs = Eigen::Map<const CoeffMatrix<double>>(values.data(), rows, cols);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::Io, "'" + path + "': " + e.what());
  }
  return s;
}

}  // namespace swe
