#pragma once

// Modal P^K discontinuous Galerkin discretisation on the 6N² cubed-sphere cells.
//
// Unknowns are U = (Λh, Λhu, Λhv) expanded in the total-degree Legendre basis
// on each cell's reference square. Volume integrals use the (K+2)² tensor
// Gauss–Lobatto rule, edge integrals the K+2 point rule, so edge nodes are a
// subset of volume nodes. Interface states come from the local evolution
// operator (chart variables of the panel on shared-panel edges, the
// longitude/latitude chart wherever the incident cells span two or more
// panels) or from a Rusanov flux.

#include "swe/basis.hpp"
#include "swe/bicharacteristics.hpp"
#include "swe/evolution_operator.hpp"
#include "swe/geometry.hpp"
#include "swe/mesh.hpp"
#include "swe/quadrature.hpp"
#include "swe/swe_core.hpp"

#include <array>
#include <functional>
#include <vector>

namespace swe {

enum class FluxMode { Leg, Baseline };

template <std::floating_point Scalar>
using CoeffMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Column c holds cell c; row v·nb + ℓ holds variable v, basis function ℓ.
template <std::floating_point Scalar>
struct DGField {
  int degree = 1;
  CoeffMatrix<Scalar> coeffs;

  [[nodiscard]] int basis() const { return basis_size(degree); }
  [[nodiscard]] int cells() const { return static_cast<int>(coeffs.cols()); }
};

/// Depth and spherical velocity (h, u_s, v_s) at a point, in m and m/s.
template <std::floating_point Scalar>
using SphericalState = Primitive<Scalar>;

template <std::floating_point Scalar>
struct Problem {
  PhysicalConstants<Scalar> constants;
  /// Bottom height b in m. The solver carries b_h = Π(Λb)/Λ_h, the same
  /// representation as the depth, so h + b_h is exactly flat for a lake at rest.
  std::function<Scalar(const SphericalPoint<Scalar>&)> topography;
  /// Extra momentum forcing (a_us, a_vs) in m/s² at (point, time).
  std::function<Vec2<Scalar>(const SphericalPoint<Scalar>&, Scalar)> forcing;
  /// Reference depth whose constant pressure is removed from the flux.
  Scalar href = 0;
};

/// Rusanov flux in panel reference coordinates for a reference normal n.
template <std::floating_point Scalar>
Vec3<Scalar> baseline_flux(const Vec3<Scalar>& ul, const Vec3<Scalar>& ur, const Vec2<Scalar>& n,
                           const MetricData<Scalar>& m, Scalar g, Scalar href = 0) {
  const Primitive<Scalar> l = cons_to_prim(ul, m.jac), r = cons_to_prim(ur, m.jac);
  const Scalar kn = std::sqrt(n.dot(m.inv * n));
  const Scalar s = std::max(std::abs(l.velocity().dot(n)) + std::sqrt(g * l.h) * kn,
                            std::abs(r.velocity().dot(n)) + std::sqrt(g * r.h) * kn);
  return Scalar(0.5) * (normal_flux(l, m.inv, m.jac, n, g, href) + normal_flux(r, m.inv, m.jac, n, g, href)) -
         Scalar(0.5) * s * (ur - ul);
}

/// Rusanov flux of spherical states across a seam; `normal` is Λ A⁻ᵀ n of the
/// left cell, so the result is in the left cell's scaling.
template <std::floating_point Scalar>
Vec3<Scalar> baseline_flux_physical(const SphericalState<Scalar>& l, const SphericalState<Scalar>& r,
                                    const Vec2<Scalar>& normal, Scalar g, Scalar href = 0) {
  if (!(l.h > 0 && r.h > 0)) raise(ErrorKind::NonPositiveDepth, "depth must be positive");
  const Scalar nn = normal.norm();
  const Scalar s = std::max(std::abs(l.velocity().dot(normal)) + std::sqrt(g * l.h) * nn,
                            std::abs(r.velocity().dot(normal)) + std::sqrt(g * r.h) * nn);
  const Vec3<Scalar> wl(l.h, l.h * l.u, l.h * l.v), wr(r.h, r.h * r.u, r.h * r.v);
  return Scalar(0.5) * (edge_physical_flux(l, normal, g, href) + edge_physical_flux(r, normal, g, href)) -
         Scalar(0.5) * s * (wr - wl);
}

/// Both incident cells' view of one edge quadrature node.
template <std::floating_point Scalar>
struct EdgeFluxPair {
  Vec3<Scalar> side_a;      ///< outward flux of cell a, its reference coordinates
  Vec3<Scalar> side_b;      ///< outward flux of cell b, its reference coordinates
  Vec3<Scalar> physical_a;  ///< diag(1, A_a)·side_a
  Vec3<Scalar> physical_b;  ///< diag(1, A_b)·side_b
  SphericalState<Scalar> state;  ///< interface state (LEG mode)
};

template <std::floating_point Scalar>
class DGSolver {
 public:
  DGSolver(const Mesh& mesh, int degree, Problem<Scalar> problem);

  [[nodiscard]] const Mesh& mesh() const { return mesh_; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int basis() const { return nb_; }
  [[nodiscard]] const Rule1D<Scalar>& rule() const { return rule_; }
  [[nodiscard]] const Problem<Scalar>& problem() const { return problem_; }
  [[nodiscard]] Scalar half_width() const { return half_; }
  [[nodiscard]] int volume_nodes() const { return nq_; }

  /// Reference coordinates of volume node q (tensor index q = a + (K+2)·b).
  [[nodiscard]] Vec2<Scalar> node_coords(int q) const;
  [[nodiscard]] const MetricData<Scalar>& node_metric(int cell, int q) const;
  /// Cell projection Λ_h of the Jacobian at volume node q; depth is recovered as U₁/Λ_h.
  [[nodiscard]] Scalar node_jacobian_h(int cell, int q) const;
  [[nodiscard]] PanelPoint<Scalar> node_point(int cell, int q) const;
  [[nodiscard]] SphericalPoint<Scalar> node_sphere(int cell, int q) const { return nodes_[cell * nq_ + q].s; }
  [[nodiscard]] const VelocityMatrix<Scalar>& node_velocity_matrix(int cell, int q) const {
    return nodes_[cell * nq_ + q].a;
  }
  [[nodiscard]] Scalar node_coriolis(int cell, int q) const { return nodes_[cell * nq_ + q].f; }
  /// Discrete bottom b_h at volume node q.
  [[nodiscard]] Scalar node_topography(int cell, int q) const { return nodes_[cell * nq_ + q].b; }
  /// Physical gradient (east, north) of b_h at volume node q.
  [[nodiscard]] Vec2<Scalar> node_topography_gradient(int cell, int q) const {
    return nodes_[cell * nq_ + q].ainv.transpose() * nodes_[cell * nq_ + q].grad_b;
  }
  /// Discrete bottom b_h at reference point st of a cell; zero without topography.
  [[nodiscard]] Scalar bottom(int cell, const Vec2<Scalar>& st) const;
  /// Basis values at volume nodes, nq × nb.
  [[nodiscard]] const CoeffMatrix<Scalar>& volume_basis() const { return vol_phi_; }
  [[nodiscard]] const CoeffMatrix<Scalar>& volume_basis_ds() const { return vol_ds_; }
  [[nodiscard]] const CoeffMatrix<Scalar>& volume_basis_dt() const { return vol_dt_; }
  [[nodiscard]] const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& volume_weights() const { return vol_w_; }

  [[nodiscard]] DGField<Scalar> zero_field() const;
  /// L2 projection of the conservative variables of a spherical-state field.
  [[nodiscard]] DGField<Scalar> project(const std::function<SphericalState<Scalar>(const SphericalPoint<Scalar>&)>& fn) const;
  /// Conservative state at volume node q of a cell.
  [[nodiscard]] Vec3<Scalar> node_state(const DGField<Scalar>& field, int cell, int q) const;
  /// Spherical state at volume node q of a cell.
  [[nodiscard]] SphericalState<Scalar> node_spherical(const DGField<Scalar>& field, int cell, int q) const;
  /// Spherical state at reference point st of a cell.
  [[nodiscard]] SphericalState<Scalar> evaluate(const DGField<Scalar>& field, int cell, const Vec2<Scalar>& st) const;
  /// Cell containing a point and the point's reference coordinates there.
  [[nodiscard]] int locate(const SphericalPoint<Scalar>& s, Vec2<Scalar>& st) const;

  /// Moment time derivatives dU/dt of the semi-discrete system.
  void residual(const DGField<Scalar>& field, Scalar t, FluxMode mode, DGField<Scalar>& out) const;
  [[nodiscard]] DGField<Scalar> residual(const DGField<Scalar>& field, Scalar t, FluxMode mode) const;

  /// Largest cell-centre value of max|λ(θ=0)| + max|λ(θ=π/2)| over the cell-mean states.
  [[nodiscard]] Scalar wave_rate(const DGField<Scalar>& field) const;

  /// Interface data at node m (edge a-side parameter order) of an edge.
  [[nodiscard]] EdgeFluxPair<Scalar> edge_flux(const DGField<Scalar>& field, int edge, int m, FluxMode mode) const;

 private:
  struct NodeData {
    SphericalPoint<Scalar> s;
    VelocityMatrix<Scalar> a;
    Mat2<Scalar> ainv;
    Vec2<Scalar> grad_b;  ///< (∂b_h/∂x, ∂b_h/∂y)
    Scalar f = 0;
    Scalar b = 0;
  };
  struct EdgeMetric {
    Mat2<Scalar> inv;
    Scalar jac = 0;
    Scalar jac_h = 0;
  };
  struct Incident {
    int slot = 0;  ///< trace slot (cell·4 + side)·ne + m
    Mat2<Scalar> to_chart;
    Scalar wedge_lo = 0;
    Scalar wedge_span = 0;
  };
  struct FluxNode {
    bool latlon = false;
    Scalar lat = 0;
    ConeMetric<Scalar> cone;
    int count = 0;
    std::array<Incident, 4> incident;
    int rays = 0;
    std::array<Vec2<Scalar>, kMaxRays> ray;
  };
  struct EdgeNode {
    int node = 0;
    int slot_a = 0, slot_b = 0;
    bool seam = false;
    Vec2<Scalar> n;     ///< reference normal of side a
    Mat2<Scalar> ginv;  ///< metric at the node (side a panel)
    Scalar jac = 0;
    Vec2<Scalar> normal_s;  ///< Λ_a A_a⁻ᵀ n
    Mat2<Scalar> a_a, a_b, ainv_a, ainv_b;
  };

  [[nodiscard]] int slot(int cell, int side, int m) const { return (cell * 4 + side) * ne_ + m; }
  [[nodiscard]] const EdgeMetric& edge_metric(int cell, int side, int m) const;
  void compute_traces(const DGField<Scalar>& field, std::vector<Primitive<Scalar>>& traces) const;
  [[nodiscard]] Primitive<Scalar> leg_state(const FluxNode& node, const std::vector<Primitive<Scalar>>& traces) const;
  /// Hydrostatic reconstruction h* = max(0, h + b_h − b*) with b* the highest
  /// incident bottom at the flux node; traces pass through without topography.
  [[nodiscard]] const std::vector<Primitive<Scalar>>& reconstruct(const std::vector<Primitive<Scalar>>& traces,
                                                                  std::vector<Primitive<Scalar>>& storage) const;
  /// Adds ½g(h² − h*²) along the slot's outward metric normal, the edge part of the bottom source.
  void add_hydrostatic_correction(int slot, const Primitive<Scalar>& trace, const Primitive<Scalar>& recon,
                                  Vec3<Scalar>& flux) const;
  void node_fluxes(const EdgeNode& e, const std::vector<Primitive<Scalar>>& traces,
                   const std::vector<Primitive<Scalar>>& states, FluxMode mode, Vec3<Scalar>& fa,
                   Vec3<Scalar>& fb) const;
  void build_geometry();
  void build_flux_nodes();
  void build_bottom();

  const Mesh& mesh_;
  int degree_;
  int nb_;
  int ne_;  ///< nodes per edge, K + 2
  int nq_;  ///< volume nodes, (K + 2)²
  Scalar half_;
  Problem<Scalar> problem_;
  Rule1D<Scalar> rule_;

  CoeffMatrix<Scalar> vol_phi_, vol_ds_, vol_dt_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vol_w_;
  CoeffMatrix<Scalar> w_phi_t_, w_ds_t_, w_dt_t_;  ///< nb × nq, weights folded in
  std::array<CoeffMatrix<Scalar>, 4> side_phi_;     ///< ne × nb per side
  std::array<CoeffMatrix<Scalar>, 4> side_w_phi_t_;  ///< nb × ne per side, weights folded in
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv_mass_;

  std::vector<MetricData<Scalar>> local_metric_;  ///< per (j, k, q), shared across panels
  std::vector<Scalar> local_jac_h_;               ///< per (j, k, q)
  std::vector<Scalar> local_jac_coeff_;           ///< per (j, k, ℓ)
  std::vector<EdgeMetric> local_edge_metric_;     ///< per (j, k, side, m)
  std::vector<NodeData> nodes_;                   ///< per (cell, q)
  std::vector<FluxNode> flux_nodes_;
  std::vector<EdgeNode> edge_nodes_;  ///< per (edge, m)
  std::vector<Scalar> bottom_coeff_;  ///< Π(Λb) per (cell, ℓ); empty without topography
  std::vector<Scalar> slot_drop_;     ///< b_h − b* ≤ 0 per trace slot
  std::vector<Vec2<Scalar>> slot_normal_;  ///< Λ G⁻¹ n_out per trace slot
};

extern template class DGSolver<double>;

}  // namespace swe
