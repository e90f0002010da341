#include "swe/mesh.hpp"

#include "swe/geometry.hpp"

#include <cmath>
#include <map>
#include <tuple>

namespace swe {

namespace {

using Key = std::tuple<long long, long long, long long>;

// Points shared by several panels agree to ~1e−16; a 1e−8 lattice identifies them.
Key lattice_key(const Vec3<double>& r) {
  constexpr double scale = 1e8;
  return {std::llround(r.x() * scale), std::llround(r.y() * scale), std::llround(r.z() * scale)};
}

}  // namespace

Vec2<double> Mesh::to_panel(int cell_idx, const Vec2<double>& st) const {
  const CellId c = cell(cell_idx);
  const double h = 0.5 * width();
  return {x_centre(c.j) + h * st.x(), x_centre(c.k) + h * st.y()};
}

Mesh::Mesh(int n) : n_(n) {
  if (n < 1) raise(ErrorKind::Usage, "mesh needs at least one cell per panel direction");
  const int nc = cells();
  side_edge_.assign(4 * nc, -1);
  corner_vertex_.assign(4 * nc, -1);

  auto point = [&](int c, const Vec2<double>& st) {
    const Vec2<double> xy = to_panel(c, st);
    return panel_to_cartesian(PanelPoint<double>{cell(c).panel, xy.x(), xy.y()});
  };

  std::map<Key, int> edge_by_mid;
  for (int c = 0; c < nc; ++c) {
    for (int s = 0; s < 4; ++s) {
      const Key key = lattice_key(point(c, side_point(s, 0)));
      const auto it = edge_by_mid.find(key);
      if (it == edge_by_mid.end()) {
        edge_by_mid.emplace(key, static_cast<int>(edges_.size()));
        MeshEdge e;
        e.a = {c, s};
        side_edge_[4 * c + s] = static_cast<int>(edges_.size());
        edges_.push_back(e);
        continue;
      }
      MeshEdge& e = edges_[it->second];
      if (e.b.cell >= 0) raise(ErrorKind::Usage, "edge shared by more than two cells");
      e.b = {c, s};
      e.seam = cell(e.a.cell).panel != cell(c).panel;
      const Vec3<double> start_a = point(e.a.cell, side_point(e.a.side, -1));
      const Vec3<double> start_b = point(c, side_point(s, -1));
      e.flip = (start_a - start_b).norm() > 1e-9;
      side_edge_[4 * c + s] = it->second;
    }
  }
  for (const MeshEdge& e : edges_)
    if (e.b.cell < 0) raise(ErrorKind::Usage, "unmatched cell side");

  std::map<Key, int> vertex_by_pos;
  for (int c = 0; c < nc; ++c) {
    for (int q = 0; q < 4; ++q) {
      const Key key = lattice_key(point(c, corner_coords(q)));
      auto [it, fresh] = vertex_by_pos.emplace(key, static_cast<int>(vertices_.size()));
      if (fresh) vertices_.emplace_back();
      MeshVertex& v = vertices_[it->second];
      if (v.count == 4) raise(ErrorKind::Usage, "vertex shared by more than four cells");
      v.incident[v.count++] = {c, q};
      if (cell(v.incident[0].cell).panel != cell(c).panel) v.seam = true;
      corner_vertex_[4 * c + q] = it->second;
    }
  }
}

SideRef Mesh::neighbour(int cell_idx, int side) const {
  const MeshEdge& e = edges_[edge_of(cell_idx, side)];
  return (e.a.cell == cell_idx && e.a.side == side) ? e.b : e.a;
}

}  // namespace swe
