#include "swe/dg_solver.hpp"

#include "swe/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swe {

namespace {

// Corner index at the start (0) / end (1) of each side's parameter.
constexpr int kSideCorner[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
// Trace (side, end) of each corner.
constexpr int kCornerSide[4] = {0, 0, 2, 2};
constexpr int kCornerEnd[4] = {0, 1, 1, 0};

template <std::floating_point Scalar>
Mat2<Scalar> latlon_chart_map(Scalar lat, Scalar radius) {
  Mat2<Scalar> m = Mat2<Scalar>::Zero();
  m(0, 0) = 1 / (radius * std::cos(lat));
  m(1, 1) = 1 / radius;
  return m;
}

template <std::floating_point Scalar>
Scalar direction_angle(const Vec2<Scalar>& v) {
  return wrap_angle(std::atan2(v.y(), v.x()));
}

}  // namespace

template <std::floating_point Scalar>
DGSolver<Scalar>::DGSolver(const Mesh& mesh, int degree, Problem<Scalar> problem)
    : mesh_(mesh),
      degree_(degree),
      nb_(basis_size(degree)),
      ne_(degree + 2),
      nq_((degree + 2) * (degree + 2)),
      half_(Scalar(0.5) * static_cast<Scalar>(mesh.width())),
      problem_(std::move(problem)),
      rule_(gauss_lobatto<Scalar>(degree + 2)) {
  if (degree < 1 || degree > 3) raise(ErrorKind::Usage, "polynomial degree must be 1, 2 or 3");
  build_geometry();
  build_flux_nodes();
  build_bottom();
}

template <std::floating_point Scalar>
Vec2<Scalar> DGSolver<Scalar>::node_coords(int q) const {
  return {rule_.nodes[q % ne_], rule_.nodes[q / ne_]};
}

template <std::floating_point Scalar>
PanelPoint<Scalar> DGSolver<Scalar>::node_point(int cell, int q) const {
  const Vec2<double> xy = mesh_.to_panel(cell, node_coords(q).template cast<double>());
  return {mesh_.cell(cell).panel, static_cast<Scalar>(xy.x()), static_cast<Scalar>(xy.y())};
}

template <std::floating_point Scalar>
const MetricData<Scalar>& DGSolver<Scalar>::node_metric(int cell, int q) const {
  const CellId c = mesh_.cell(cell);
  return local_metric_[(c.k * mesh_.n() + c.j) * nq_ + q];
}

template <std::floating_point Scalar>
Scalar DGSolver<Scalar>::node_jacobian_h(int cell, int q) const {
  const CellId c = mesh_.cell(cell);
  return local_jac_h_[(c.k * mesh_.n() + c.j) * nq_ + q];
}

template <std::floating_point Scalar>
auto DGSolver<Scalar>::edge_metric(int cell, int side, int m) const -> const EdgeMetric& {
  const CellId c = mesh_.cell(cell);
  return local_edge_metric_[((c.k * mesh_.n() + c.j) * 4 + side) * ne_ + m];
}

template <std::floating_point Scalar>
void DGSolver<Scalar>::build_geometry() {
  const int n = mesh_.n();
  const Scalar radius = problem_.constants.radius;
  vol_phi_.resize(nq_, nb_);
  vol_ds_.resize(nq_, nb_);
  vol_dt_.resize(nq_, nb_);
  vol_w_.resize(nq_);
  for (int q = 0; q < nq_; ++q) {
    const Vec2<Scalar> st = node_coords(q);
    vol_w_[q] = rule_.weights[q % ne_] * rule_.weights[q / ne_];
    for (int l = 0; l < nb_; ++l) {
      const BasisValue<Scalar> b = basis_eval(l, st.x(), st.y());
      vol_phi_(q, l) = b.value;
      vol_ds_(q, l) = b.ds;
      vol_dt_(q, l) = b.dt;
    }
  }
  w_phi_t_ = (vol_w_.asDiagonal() * vol_phi_).transpose();
  w_ds_t_ = (vol_w_.asDiagonal() * vol_ds_).transpose();
  w_dt_t_ = (vol_w_.asDiagonal() * vol_dt_).transpose();
  const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> ew(rule_.weights.data(), ne_);
  for (int s = 0; s < 4; ++s) {
    side_phi_[s].resize(ne_, nb_);
    for (int m = 0; m < ne_; ++m) {
      const Vec2<double> st = side_point(s, static_cast<double>(rule_.nodes[m]));
      for (int l = 0; l < nb_; ++l)
        side_phi_[s](m, l) = basis_eval(l, static_cast<Scalar>(st.x()), static_cast<Scalar>(st.y())).value;
    }
    side_w_phi_t_[s] = (ew.asDiagonal() * side_phi_[s]).transpose();
  }
  inv_mass_.resize(nb_);
  for (int l = 0; l < nb_; ++l) inv_mass_[l] = 1 / (half_ * half_ * basis_norm2<Scalar>(l));

  local_metric_.resize(static_cast<size_t>(n) * n * nq_);
  local_jac_h_.resize(local_metric_.size());
  local_jac_coeff_.resize(static_cast<size_t>(n) * n * nb_);
  local_edge_metric_.resize(static_cast<size_t>(n) * n * 4 * ne_);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> jac(nq_);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const int cell = mesh_.index(1, j, k);
      for (int q = 0; q < nq_; ++q) {
        local_metric_[(k * n + j) * nq_ + q] = metric_at(node_point(cell, q), radius);
        jac[q] = local_metric_[(k * n + j) * nq_ + q].jac;
      }
      // Λ_h = Π Λ, so the projection of Λ·h₀ recovers h₀ at every node.
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> jac_coeff =
          (half_ * half_) * inv_mass_.asDiagonal() * (w_phi_t_ * jac);
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> jac_nodes = vol_phi_ * jac_coeff;
      for (int q = 0; q < nq_; ++q) local_jac_h_[(k * n + j) * nq_ + q] = jac_nodes[q];
      for (int l = 0; l < nb_; ++l) local_jac_coeff_[(k * n + j) * nb_ + l] = jac_coeff[l];
      for (int s = 0; s < 4; ++s) {
        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> jac_side = side_phi_[s] * jac_coeff;
        for (int m = 0; m < ne_; ++m) {
          const Vec2<double> xy = mesh_.to_panel(cell, side_point(s, static_cast<double>(rule_.nodes[m])));
          const MetricData<Scalar> md =
              metric_at(PanelPoint<Scalar>{1, static_cast<Scalar>(xy.x()), static_cast<Scalar>(xy.y())}, radius);
          local_edge_metric_[((k * n + j) * 4 + s) * ne_ + m] = {md.inv, md.jac, jac_side[m]};
        }
      }
    }
  }

  nodes_.resize(static_cast<size_t>(mesh_.cells()) * nq_);
  for (int c = 0; c < mesh_.cells(); ++c) {
    for (int q = 0; q < nq_; ++q) {
      NodeData& d = nodes_[c * nq_ + q];
      const PanelPoint<Scalar> p = node_point(c, q);
      d.s = panel_to_sphere(p);
      d.a = velocity_matrix_at(p, radius);
      d.ainv = d.a.inverse();
      d.f = coriolis(d.s, problem_.constants);
      d.grad_b = Vec2<Scalar>::Zero();
    }
  }
}

template <std::floating_point Scalar>
void DGSolver<Scalar>::build_flux_nodes() {
  const Scalar radius = problem_.constants.radius;
  const auto& edges = mesh_.edges();
  const auto& vertices = mesh_.vertices();

  auto panel_point = [&](int cell, int side, int m) {
    const Vec2<double> xy = mesh_.to_panel(cell, side_point(side, static_cast<double>(rule_.nodes[m])));
    return PanelPoint<Scalar>{mesh_.cell(cell).panel, static_cast<Scalar>(xy.x()), static_cast<Scalar>(xy.y())};
  };

  // P is taken from the first incident cell; the chart follows from `latlon`.
  auto open_node = [&](FluxNode& node, int cell, int side, int m) {
    const PanelPoint<Scalar> p = panel_point(cell, side, m);
    if (node.latlon) {
      node.lat = panel_to_sphere(p).lat;
      node.cone = make_cone_metric(latlon_inverse_metric(node.lat, radius));
    } else {
      node.cone = make_cone_metric(metric_at(p, radius).inv);
    }
  };

  auto add_incident = [&](FluxNode& node, int cell, int side, int m, const Vec2<Scalar>& r1, const Vec2<Scalar>& r2,
                          const Vec2<Scalar>& inward) {
    Incident inc;
    inc.slot = slot(cell, side, m);
    inc.to_chart = node.latlon ? Mat2<Scalar>(latlon_chart_map(node.lat, radius) *
                                              velocity_matrix_at(panel_point(cell, side, m), radius))
                               : Mat2<Scalar>::Identity();
    const Vec2<Scalar> c1 = inc.to_chart * r1, c2 = inc.to_chart * r2, d = inc.to_chart * inward;
    const bool first = cross2(c1, d) > 0;
    const Vec2<Scalar>& lo = first ? c1 : c2;
    const Vec2<Scalar>& hi = first ? c2 : c1;
    inc.wedge_lo = direction_angle(lo);
    inc.wedge_span = wrap_angle(direction_angle(hi) - inc.wedge_lo);
    node.incident[node.count++] = inc;
    for (const Vec2<Scalar>& r : {c1, c2}) {
      const Scalar ang = direction_angle(r);
      bool seen = false;
      for (int i = 0; i < node.rays; ++i) {
        const Scalar gap = std::abs(wrap_angle(ang - direction_angle(node.ray[i]) + kPi<Scalar>) - kPi<Scalar>);
        if (gap < Scalar(1e-8)) seen = true;
      }
      if (!seen) {
        if (node.rays == kMaxRays) raise(ErrorKind::SingularSystem, "too many edge rays at a flux node");
        node.ray[node.rays++] = r;
      }
    }
  };

  auto add_side_incident = [&](FluxNode& node, int cell, int side, int m) {
    const Vec2<Scalar> t = (side == 0 || side == 2) ? Vec2<Scalar>(1, 0) : Vec2<Scalar>(0, 1);
    add_incident(node, cell, side, m, t, Vec2<Scalar>(-t), Vec2<Scalar>(-side_normal(side).template cast<Scalar>()));
  };

  auto add_corner_incident = [&](FluxNode& node, int cell, int corner) {
    const Vec2<Scalar> st = corner_coords(corner).template cast<Scalar>();
    const int side = kCornerSide[corner];
    const int m = kCornerEnd[corner] == 0 ? 0 : ne_ - 1;
    add_incident(node, cell, side, m, Vec2<Scalar>(-st.x(), 0), Vec2<Scalar>(0, -st.y()), Vec2<Scalar>(-st));
  };

  const int interior = ne_ - 2;
  flux_nodes_.clear();
  flux_nodes_.reserve(edges.size() * interior + vertices.size());
  for (const MeshEdge& e : edges) {
    for (int m = 1; m <= interior; ++m) {
      FluxNode node;
      node.latlon = e.seam;
      open_node(node, e.a.cell, e.a.side, m);
      add_side_incident(node, e.a.cell, e.a.side, m);
      add_side_incident(node, e.b.cell, e.b.side, e.flip ? ne_ - 1 - m : m);
      flux_nodes_.push_back(node);
    }
  }
  const int vertex_base = static_cast<int>(flux_nodes_.size());
  for (const MeshVertex& v : vertices) {
    FluxNode node;
    node.latlon = v.seam;
    const CornerRef& first = v.incident[0];
    open_node(node, first.cell, kCornerSide[first.corner], kCornerEnd[first.corner] == 0 ? 0 : ne_ - 1);
    for (int i = 0; i < v.count; ++i) add_corner_incident(node, v.incident[i].cell, v.incident[i].corner);
    flux_nodes_.push_back(node);
  }

  edge_nodes_.resize(edges.size() * ne_);
  for (size_t ei = 0; ei < edges.size(); ++ei) {
    const MeshEdge& e = edges[ei];
    for (int m = 0; m < ne_; ++m) {
      EdgeNode& en = edge_nodes_[ei * ne_ + m];
      const int mb = e.flip ? ne_ - 1 - m : m;
      if (m == 0 || m == ne_ - 1) {
        const int corner = kSideCorner[e.a.side][m == 0 ? 0 : 1];
        en.node = vertex_base + mesh_.vertex_of(e.a.cell, corner);
      } else {
        en.node = static_cast<int>(ei) * interior + (m - 1);
      }
      en.slot_a = slot(e.a.cell, e.a.side, m);
      en.slot_b = slot(e.b.cell, e.b.side, mb);
      en.seam = e.seam;
      en.n = side_normal(e.a.side).template cast<Scalar>();
      const EdgeMetric& em = edge_metric(e.a.cell, e.a.side, m);
      en.ginv = em.inv;
      en.jac = em.jac;
      en.a_a = velocity_matrix_at(panel_point(e.a.cell, e.a.side, m), radius);
      en.a_b = velocity_matrix_at(panel_point(e.b.cell, e.b.side, mb), radius);
      en.ainv_a = en.a_a.inverse();
      en.ainv_b = en.a_b.inverse();
      en.normal_s = em.jac * (en.ainv_a.transpose() * en.n);
    }
  }
}

template <std::floating_point Scalar>
void DGSolver<Scalar>::build_bottom() {
  const size_t slots = static_cast<size_t>(mesh_.cells()) * 4 * ne_;
  slot_normal_.resize(slots);
  for (int c = 0; c < mesh_.cells(); ++c)
    for (int s = 0; s < 4; ++s)
      for (int m = 0; m < ne_; ++m) {
        const EdgeMetric& em = edge_metric(c, s, m);
        slot_normal_[slot(c, s, m)] = em.jac * (em.inv * side_normal(s).template cast<Scalar>());
      }
  if (!problem_.topography) return;

  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  bottom_coeff_.resize(static_cast<size_t>(mesh_.cells()) * nb_);
  std::vector<Scalar> slot_b(slots);
  Vec values(nq_);
  for (int c = 0; c < mesh_.cells(); ++c) {
    for (int q = 0; q < nq_; ++q) values[q] = node_metric(c, q).jac * problem_.topography(nodes_[c * nq_ + q].s);
    const Vec coeff = (half_ * half_) * inv_mass_.asDiagonal() * (w_phi_t_ * values);
    std::copy(coeff.data(), coeff.data() + nb_, bottom_coeff_.begin() + static_cast<std::ptrdiff_t>(c) * nb_);
    const CellId id = mesh_.cell(c);
    const Eigen::Map<const Vec> jc(&local_jac_coeff_[(id.k * mesh_.n() + id.j) * nb_], nb_);
    const Vec bv = vol_phi_ * coeff, bs = vol_ds_ * coeff, bt = vol_dt_ * coeff;
    const Vec jv = vol_phi_ * jc, js = vol_ds_ * jc, jt = vol_dt_ * jc;
    for (int q = 0; q < nq_; ++q) {
      // b_h = B/Λ_h; ∂_x = ∂_s / half by the quotient rule.
      NodeData& d = nodes_[c * nq_ + q];
      d.b = bv[q] / jv[q];
      d.grad_b = Vec2<Scalar>(bs[q] - d.b * js[q], bt[q] - d.b * jt[q]) / (half_ * jv[q]);
    }
    for (int s = 0; s < 4; ++s) {
      const Vec side = side_phi_[s] * coeff;
      for (int m = 0; m < ne_; ++m) slot_b[slot(c, s, m)] = side[m] / edge_metric(c, s, m).jac_h;
    }
  }
  // Every slot, including each corner's copies on two sides, is an edge-node slot of its flux node.
  std::vector<Scalar> highest(flux_nodes_.size(), -std::numeric_limits<Scalar>::infinity());
  for (const EdgeNode& e : edge_nodes_) highest[e.node] = std::max({highest[e.node], slot_b[e.slot_a], slot_b[e.slot_b]});
  slot_drop_.assign(slots, 0);
  for (const EdgeNode& e : edge_nodes_) {
    slot_drop_[e.slot_a] = slot_b[e.slot_a] - highest[e.node];
    slot_drop_[e.slot_b] = slot_b[e.slot_b] - highest[e.node];
  }
}

template <std::floating_point Scalar>
Scalar DGSolver<Scalar>::bottom(int cell, const Vec2<Scalar>& st) const {
  if (bottom_coeff_.empty()) return 0;
  const CellId id = mesh_.cell(cell);
  const Scalar* jc = &local_jac_coeff_[(id.k * mesh_.n() + id.j) * nb_];
  const Scalar* bc = &bottom_coeff_[static_cast<size_t>(cell) * nb_];
  Scalar b = 0, jac_h = 0;
  for (int l = 0; l < nb_; ++l) {
    const Scalar phi = basis_eval(l, st.x(), st.y()).value;
    b += bc[l] * phi;
    jac_h += jc[l] * phi;
  }
  return b / jac_h;
}

template <std::floating_point Scalar>
DGField<Scalar> DGSolver<Scalar>::zero_field() const {
  DGField<Scalar> f;
  f.degree = degree_;
  f.coeffs = CoeffMatrix<Scalar>::Zero(3 * nb_, mesh_.cells());
  return f;
}

template <std::floating_point Scalar>
DGField<Scalar> DGSolver<Scalar>::project(
    const std::function<SphericalState<Scalar>(const SphericalPoint<Scalar>&)>& fn) const {
  DGField<Scalar> field = zero_field();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 3> values(nq_, 3);
  for (int c = 0; c < mesh_.cells(); ++c) {
    for (int q = 0; q < nq_; ++q) {
      const NodeData& d = nodes_[c * nq_ + q];
      const SphericalState<Scalar> ws = fn(d.s);
      const Primitive<Scalar> w = Primitive<Scalar>::from(ws.h, Vec2<Scalar>(d.ainv * ws.velocity()));
      values.row(q) = prim_to_cons(w, node_metric(c, q).jac).transpose();
    }
    Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 3>> out(field.coeffs.col(c).data(), nb_, 3);
    out = (half_ * half_) * inv_mass_.asDiagonal() * (w_phi_t_ * values);
    if (!(out(0, 0) > 0)) raise(ErrorKind::NonPositiveDepth, "projected cell mean depth is not positive");
  }
  return field;
}

template <std::floating_point Scalar>
Vec3<Scalar> DGSolver<Scalar>::node_state(const DGField<Scalar>& field, int cell, int q) const {
  const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 3>> c(field.coeffs.col(cell).data(), nb_, 3);
  return (vol_phi_.row(q) * c).transpose();
}

template <std::floating_point Scalar>
SphericalState<Scalar> DGSolver<Scalar>::node_spherical(const DGField<Scalar>& field, int cell, int q) const {
  const Primitive<Scalar> w = cons_to_prim(node_state(field, cell, q), node_jacobian_h(cell, q));
  return SphericalState<Scalar>::from(w.h, Vec2<Scalar>(nodes_[cell * nq_ + q].a * w.velocity()));
}

template <std::floating_point Scalar>
SphericalState<Scalar> DGSolver<Scalar>::evaluate(const DGField<Scalar>& field, int cell, const Vec2<Scalar>& st) const {
  const CellId id = mesh_.cell(cell);
  const Scalar* jc = &local_jac_coeff_[(id.k * mesh_.n() + id.j) * nb_];
  Vec3<Scalar> u = Vec3<Scalar>::Zero();
  Scalar jac_h = 0;
  for (int l = 0; l < nb_; ++l) {
    const Scalar phi = basis_eval(l, st.x(), st.y()).value;
    jac_h += jc[l] * phi;
    for (int v = 0; v < 3; ++v) u[v] += field.coeffs(v * nb_ + l, cell) * phi;
  }
  const Primitive<Scalar> w = cons_to_prim(u, jac_h);
  const Vec2<double> xy = mesh_.to_panel(cell, st.template cast<double>());
  const VelocityMatrix<Scalar> a = velocity_matrix_at(
      PanelPoint<Scalar>{id.panel, static_cast<Scalar>(xy.x()), static_cast<Scalar>(xy.y())}, problem_.constants.radius);
  return SphericalState<Scalar>::from(w.h, Vec2<Scalar>(a * w.velocity()));
}

template <std::floating_point Scalar>
int DGSolver<Scalar>::locate(const SphericalPoint<Scalar>& s, Vec2<Scalar>& st) const {
  const Vec3<Scalar> r = sphere_to_cartesian(s);
  const PanelPoint<Scalar> p = cartesian_to_panel(r, panel_of(r));
  const int n = mesh_.n();
  const Scalar width = static_cast<Scalar>(mesh_.width());
  const Scalar fx = (p.x + kPi<Scalar> / 4) / width, fy = (p.y + kPi<Scalar> / 4) / width;
  const int j = std::clamp(static_cast<int>(std::floor(fx)), 0, n - 1);
  const int k = std::clamp(static_cast<int>(std::floor(fy)), 0, n - 1);
  st = Vec2<Scalar>(2 * (fx - j) - 1, 2 * (fy - k) - 1);
  return mesh_.index(p.panel, j, k);
}

template <std::floating_point Scalar>
void DGSolver<Scalar>::compute_traces(const DGField<Scalar>& field, std::vector<Primitive<Scalar>>& traces) const {
  traces.resize(static_cast<size_t>(mesh_.cells()) * 4 * ne_);
  parallel_for(mesh_.cells(), [&](int cell) {
    const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 3>> c(field.coeffs.col(cell).data(), nb_, 3);
    for (int s = 0; s < 4; ++s) {
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 3> u = side_phi_[s] * c;
      for (int m = 0; m < ne_; ++m)
        traces[slot(cell, s, m)] = cons_to_prim(Vec3<Scalar>(u.row(m).transpose()), edge_metric(cell, s, m).jac_h);
    }
  });
}

template <std::floating_point Scalar>
auto DGSolver<Scalar>::reconstruct(const std::vector<Primitive<Scalar>>& traces,
                                   std::vector<Primitive<Scalar>>& storage) const
    -> const std::vector<Primitive<Scalar>>& {
  if (slot_drop_.empty()) return traces;
  storage.resize(traces.size());
  for (size_t i = 0; i < traces.size(); ++i) {
    storage[i] = traces[i];
    storage[i].h = std::max(Scalar(0), traces[i].h + slot_drop_[i]);
  }
  return storage;
}

template <std::floating_point Scalar>
void DGSolver<Scalar>::add_hydrostatic_correction(int slot, const Primitive<Scalar>& trace,
                                                  const Primitive<Scalar>& recon, Vec3<Scalar>& flux) const {
  if (slot_drop_.empty()) return;
  const Scalar dp = Scalar(0.5) * problem_.constants.g * (trace.h * trace.h - recon.h * recon.h);
  flux.template tail<2>() += dp * slot_normal_[slot];
}

template <std::floating_point Scalar>
Primitive<Scalar> DGSolver<Scalar>::leg_state(const FluxNode& node, const std::vector<Primitive<Scalar>>& traces) const {
  const Scalar g = problem_.constants.g;
  std::array<Primitive<Scalar>, 4> chart;
  Primitive<Scalar> tilde{0, 0, 0};
  for (int i = 0; i < node.count; ++i) {
    const Primitive<Scalar>& w = traces[node.incident[i].slot];
    chart[i] = Primitive<Scalar>::from(w.h, Vec2<Scalar>(node.incident[i].to_chart * w.velocity()));
    tilde.h += chart[i].h;
    tilde.u += chart[i].u;
    tilde.v += chart[i].v;
  }
  tilde.h /= node.count;
  tilde.u /= node.count;
  tilde.v /= node.count;

  // The incident cell whose wedge at P contains direction `dir`.
  auto owner = [&](const Vec2<Scalar>& dir) -> const Primitive<Scalar>& {
    const Scalar ang = direction_angle(dir);
    int best = 0;
    Scalar best_gap = std::numeric_limits<Scalar>::infinity();
    for (int i = 0; i < node.count; ++i) {
      const Incident& inc = node.incident[i];
      const Scalar off = wrap_angle(ang - inc.wedge_lo);
      if (off <= inc.wedge_span) return chart[i];
      const Scalar gap = std::min(off - inc.wedge_span, kTwoPi<Scalar> - off);
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    return chart[best];
  };

  const std::span<const Vec2<Scalar>> rays(node.ray.data(), static_cast<size_t>(node.rays));
  const SectorPartition<Scalar> part = sector_partition(tilde, node.cone.ginv, rays, g);
  const Scalar c = std::sqrt(g * tilde.h);
  SectorTrace<Scalar> trace;
  for (int i = 0; i < part.nhat; ++i) {
    const Scalar mid = Scalar(0.5) * (part.angles[i] + part.upper(i));
    const Vec2<Scalar> n(std::cos(mid), std::sin(mid));
    const Vec2<Scalar> w = node.cone.ginv * n;
    trace.star[i] = owner(Vec2<Scalar>(c * w / std::sqrt(n.dot(w)) - tilde.velocity()));
  }
  const Vec2<Scalar> adv = tilde.velocity();
  const Scalar adv_norm = std::sqrt(adv.dot(node.cone.gcov * adv));
  trace.zero = adv_norm > Scalar(1e-12) * c ? owner(Vec2<Scalar>(-adv)) : tilde;
  return leg_operator(trace, part, tilde, node.cone, g);
}

template <std::floating_point Scalar>
void DGSolver<Scalar>::node_fluxes(const EdgeNode& e, const std::vector<Primitive<Scalar>>& traces,
                                   const std::vector<Primitive<Scalar>>& states, FluxMode mode, Vec3<Scalar>& fa,
                                   Vec3<Scalar>& fb) const {
  const Scalar g = problem_.constants.g, href = problem_.href, radius = problem_.constants.radius;
  auto split = [&](const Vec3<Scalar>& phi) {
    fa << phi[0], e.ainv_a * phi.template tail<2>();
    fb << -phi[0], -(e.ainv_b * phi.template tail<2>());
  };
  if (mode == FluxMode::Leg) {
    const FluxNode& node = flux_nodes_[e.node];
    const Primitive<Scalar>& st = states[e.node];
    if (node.latlon) {
      split(edge_physical_flux(chart_to_latlon(st, node.lat, radius), e.normal_s, g, href));
    } else {
      fa = normal_flux(st, e.ginv, e.jac, e.n, g, href);
      fb = -fa;
    }
    return;
  }
  const Primitive<Scalar>& l = traces[e.slot_a];
  const Primitive<Scalar>& r = traces[e.slot_b];
  if (e.seam) {
    split(baseline_flux_physical(SphericalState<Scalar>::from(l.h, Vec2<Scalar>(e.a_a * l.velocity())),
                                 SphericalState<Scalar>::from(r.h, Vec2<Scalar>(e.a_b * r.velocity())), e.normal_s,
                                 g, href));
    return;
  }
  MetricData<Scalar> m;
  m.inv = e.ginv;
  m.jac = e.jac;
  fa = baseline_flux(prim_to_cons(l, e.jac), prim_to_cons(r, e.jac), e.n, m, g, href);
  fb = -fa;
}

template <std::floating_point Scalar>
void DGSolver<Scalar>::residual(const DGField<Scalar>& field, Scalar t, FluxMode mode, DGField<Scalar>& out) const {
  if (field.degree != degree_ || field.cells() != mesh_.cells()) raise(ErrorKind::Usage, "field does not match solver");
  std::vector<Primitive<Scalar>> traces, storage;
  compute_traces(field, traces);
  const std::vector<Primitive<Scalar>>& recon = reconstruct(traces, storage);

  std::vector<Primitive<Scalar>> states;
  if (mode == FluxMode::Leg) {
    states.resize(flux_nodes_.size());
    parallel_for(static_cast<int>(flux_nodes_.size()), [&](int i) { states[i] = leg_state(flux_nodes_[i], recon); });
  }

  std::vector<Vec3<Scalar>> fluxes(traces.size());
  parallel_for(static_cast<int>(edge_nodes_.size()), [&](int i) {
    const EdgeNode& e = edge_nodes_[i];
    node_fluxes(e, recon, states, mode, fluxes[e.slot_a], fluxes[e.slot_b]);
    add_hydrostatic_correction(e.slot_a, traces[e.slot_a], recon[e.slot_a], fluxes[e.slot_a]);
    add_hydrostatic_correction(e.slot_b, traces[e.slot_b], recon[e.slot_b], fluxes[e.slot_b]);
  });

  if (out.degree != degree_ || out.cells() != mesh_.cells()) out = zero_field();
  const Scalar g = problem_.constants.g, href = problem_.href;
  const bool forced = static_cast<bool>(problem_.forcing);
  parallel_for(mesh_.cells(), [&](int cell) {
    const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 3>> c(field.coeffs.col(cell).data(), nb_, 3);
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 3> u = vol_phi_ * c;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 3> f1(nq_, 3), f2(nq_, 3), src(nq_, 3);
    for (int q = 0; q < nq_; ++q) {
      const MetricData<Scalar>& m = node_metric(cell, q);
      const NodeData& d = nodes_[cell * nq_ + q];
      const Primitive<Scalar> w = cons_to_prim(Vec3<Scalar>(u.row(q).transpose()), node_jacobian_h(cell, q));
      const FluxPair<Scalar> fp = flux(w, m, g, href);
      f1.row(q) = fp.f1.transpose();
      f2.row(q) = fp.f2.transpose();
      Vec3<Scalar> s = source_S0(w, m, d.f, d.grad_b, g);
      if (forced) s.template tail<2>() += m.jac * w.h * (d.ainv * problem_.forcing(d.s, t));
      src.row(q) = s.transpose();
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, 3> r = half_ * (w_ds_t_ * f1 + w_dt_t_ * f2) + (half_ * half_) * (w_phi_t_ * src);
    for (int s = 0; s < 4; ++s) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 3> fs(ne_, 3);
      for (int m = 0; m < ne_; ++m) fs.row(m) = fluxes[slot(cell, s, m)].transpose();
      r.noalias() -= half_ * (side_w_phi_t_[s] * fs);
    }
    Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 3>> dst(out.coeffs.col(cell).data(), nb_, 3);
    dst = inv_mass_.asDiagonal() * r;
  });
}

template <std::floating_point Scalar>
DGField<Scalar> DGSolver<Scalar>::residual(const DGField<Scalar>& field, Scalar t, FluxMode mode) const {
  DGField<Scalar> out = zero_field();
  residual(field, t, mode, out);
  return out;
}

template <std::floating_point Scalar>
Scalar DGSolver<Scalar>::wave_rate(const DGField<Scalar>& field) const {
  const Scalar g = problem_.constants.g, radius = problem_.constants.radius;
  Scalar rate = 0;
  for (int cell = 0; cell < mesh_.cells(); ++cell) {
    const Vec2<double> xy = mesh_.to_panel(cell, Vec2<double>::Zero());
    const MetricData<Scalar> m = metric_at(
        PanelPoint<Scalar>{mesh_.cell(cell).panel, static_cast<Scalar>(xy.x()), static_cast<Scalar>(xy.y())}, radius);
    const Vec3<Scalar> mean(field.coeffs(0, cell), field.coeffs(nb_, cell), field.coeffs(2 * nb_, cell));
    const CellId id = mesh_.cell(cell);
    const Primitive<Scalar> w = cons_to_prim(mean, local_jac_coeff_[(id.k * mesh_.n() + id.j) * nb_]);
    const Scalar c = std::sqrt(g * w.h);
    rate = std::max(rate, std::abs(w.u) + c * std::sqrt(m.inv(0, 0)) + std::abs(w.v) + c * std::sqrt(m.inv(1, 1)));
  }
  return rate;
}

template <std::floating_point Scalar>
EdgeFluxPair<Scalar> DGSolver<Scalar>::edge_flux(const DGField<Scalar>& field, int edge, int m, FluxMode mode) const {
  std::vector<Primitive<Scalar>> traces, storage;
  compute_traces(field, traces);
  const std::vector<Primitive<Scalar>>& recon = reconstruct(traces, storage);
  const EdgeNode& e = edge_nodes_[edge * ne_ + m];
  std::vector<Primitive<Scalar>> states(flux_nodes_.size());
  EdgeFluxPair<Scalar> out;
  const FluxNode& node = flux_nodes_[e.node];
  if (mode == FluxMode::Leg) {
    states[e.node] = leg_state(node, recon);
    const Primitive<Scalar>& st = states[e.node];
    out.state = node.latlon ? chart_to_latlon(st, node.lat, problem_.constants.radius)
                            : SphericalState<Scalar>::from(st.h, Vec2<Scalar>(e.a_a * st.velocity()));
  }
  node_fluxes(e, recon, states, mode, out.side_a, out.side_b);
  add_hydrostatic_correction(e.slot_a, traces[e.slot_a], recon[e.slot_a], out.side_a);
  add_hydrostatic_correction(e.slot_b, traces[e.slot_b], recon[e.slot_b], out.side_b);
  out.physical_a << out.side_a[0], e.a_a * out.side_a.template tail<2>();
  out.physical_b << out.side_b[0], e.a_b * out.side_b.template tail<2>();
  return out;
}

template class DGSolver<double>;

}  // namespace swe
