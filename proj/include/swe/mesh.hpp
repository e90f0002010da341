#pragma once

// Cubed-sphere cell connectivity. Cell (panel, j, k) covers
// x ∈ [−π/4 + jΔ, −π/4 + (j+1)Δ], y likewise with k, Δ = π/(2N).
//
// Sides: 0 = S (t = −1), 1 = E (s = +1), 2 = N (t = +1), 3 = W (s = −1), each
// parameterised by increasing local x (S, N) or y (E, W). Corners: 0 = (−,−),
// 1 = (+,−), 2 = (+,+), 3 = (−,+).

#include "swe/common.hpp"

#include <array>
#include <vector>

namespace swe {

struct CellId {
  int panel = 1;
  int j = 0;
  int k = 0;
};

struct SideRef {
  int cell = -1;
  int side = -1;
};

struct MeshEdge {
  SideRef a;
  SideRef b;
  bool flip = false;  ///< side parameters run in opposite directions
  bool seam = false;  ///< the two cells lie on different panels
};

struct CornerRef {
  int cell = -1;
  int corner = -1;
};

struct MeshVertex {
  std::array<CornerRef, 4> incident{};
  int count = 0;       ///< 3 at cube corners, 4 elsewhere
  bool seam = false;   ///< incident cells span more than one panel
};

/// Reference-square coordinates (s, t) of a corner.
inline Vec2<double> corner_coords(int corner) {
  static constexpr double s[4] = {-1, 1, 1, -1}, t[4] = {-1, -1, 1, 1};
  return {s[corner], t[corner]};
}

/// Reference-square point on a side at parameter r ∈ [−1, 1].
inline Vec2<double> side_point(int side, double r) {
  switch (side) {
    case 0: return {r, -1};
    case 1: return {1, r};
    case 2: return {r, 1};
    default: return {-1, r};
  }
}

/// Outward unit normal of a side in panel coordinates.
inline Vec2<double> side_normal(int side) {
  switch (side) {
    case 0: return {0, -1};
    case 1: return {1, 0};
    case 2: return {0, 1};
    default: return {-1, 0};
  }
}

class Mesh {
 public:
  explicit Mesh(int n);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int cells() const { return 6 * n_ * n_; }
  [[nodiscard]] double width() const { return kPi<double> / (2 * n_); }
  [[nodiscard]] int index(int panel, int j, int k) const { return ((panel - 1) * n_ + k) * n_ + j; }
  [[nodiscard]] CellId cell(int idx) const { return {idx / (n_ * n_) + 1, idx % n_, (idx / n_) % n_}; }
  [[nodiscard]] double x_centre(int j) const { return -kPi<double> / 4 + (j + 0.5) * width(); }
  /// Panel coordinates of a reference-square point of a cell.
  [[nodiscard]] Vec2<double> to_panel(int cell_idx, const Vec2<double>& st) const;

  [[nodiscard]] const std::vector<MeshEdge>& edges() const { return edges_; }
  [[nodiscard]] const std::vector<MeshVertex>& vertices() const { return vertices_; }
  /// Edge index of a cell side, and whether the cell is the edge's `a` side.
  [[nodiscard]] int edge_of(int cell_idx, int side) const { return side_edge_[4 * cell_idx + side]; }
  [[nodiscard]] int vertex_of(int cell_idx, int corner) const { return corner_vertex_[4 * cell_idx + corner]; }
  [[nodiscard]] SideRef neighbour(int cell_idx, int side) const;

 private:
  int n_;
  std::vector<MeshEdge> edges_;
  std::vector<MeshVertex> vertices_;
  std::vector<int> side_edge_;
  std::vector<int> corner_vertex_;
};

}  // namespace swe
