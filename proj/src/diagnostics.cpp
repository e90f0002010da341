#include "swe/diagnostics.hpp"

#include <cmath>

namespace swe {

namespace {

struct NormSums {
  double area = 0, abs_err = 0, abs_ref = 0, sq_err = 0, sq_ref = 0, max_err = 0, max_ref = 0;

  void add(double w, double value, double ref) {
    const double d = value - ref;
    area += w;
    abs_err += w * std::abs(d);
    abs_ref += w * std::abs(ref);
    sq_err += w * d * d;
    sq_ref += w * ref * ref;
    max_err = std::max(max_err, std::abs(d));
    max_ref = std::max(max_ref, std::abs(ref));
  }

  [[nodiscard]] ErrorNorms norms() const {
    return {abs_ref > 0 ? abs_err / abs_ref : abs_err / area,
            sq_ref > 0 ? std::sqrt(sq_err / sq_ref) : std::sqrt(sq_err / area), max_ref > 0 ? max_err / max_ref : max_err};
  }
};

PanelPoint<double> cell_point(const Mesh& mesh, int cell, const Vec2<double>& st) {
  const Vec2<double> xy = mesh.to_panel(cell, st);
  return {mesh.cell(cell).panel, xy.x(), xy.y()};
}

}  // namespace

FieldErrors relative_errors(const DGSolver<double>& solver, const DGField<double>& field, const SphericalFn& exact,
                            int oversample) {
  if (oversample < 1) raise(ErrorKind::Usage, "norm oversampling factor must be at least 1");
  const Mesh& mesh = solver.mesh();
  const double radius = solver.problem().constants.radius;
  NormSums h, u, v;
  auto add = [&](double w, const SphericalState<double>& got, const SphericalState<double>& ref) {
    h.add(w, got.h, ref.h);
    u.add(w, got.u, ref.u);
    v.add(w, got.v, ref.v);
  };
  if (oversample == 1) {
    for (int c = 0; c < mesh.cells(); ++c)
      for (int q = 0; q < solver.volume_nodes(); ++q)
        add(solver.volume_weights()[q] * solver.node_metric(c, q).jac, solver.node_spherical(field, c, q),
            exact(solver.node_sphere(c, q)));
  } else {
    const Rule1D<double> rule = gauss_lobatto<double>(oversample * (solver.degree() + 2));
    const int m = static_cast<int>(rule.nodes.size());
    for (int c = 0; c < mesh.cells(); ++c)
      for (int b = 0; b < m; ++b)
        for (int a = 0; a < m; ++a) {
          const Vec2<double> st(rule.nodes[a], rule.nodes[b]);
          const PanelPoint<double> p = cell_point(mesh, c, st);
          add(rule.weights[a] * rule.weights[b] * metric_at(p, radius).jac, solver.evaluate(field, c, st),
              exact(panel_to_sphere(p)));
        }
  }
  return {h.norms(), u.norms(), v.norms()};
}

double vorticity(const DGSolver<double>& solver, const DGField<double>& field, int cell, const Vec2<double>& st) {
  const int nb = solver.basis();
  Vec3<double> w = Vec3<double>::Zero(), ws = Vec3<double>::Zero(), wt = Vec3<double>::Zero();
  for (int l = 0; l < nb; ++l) {
    const auto phi = basis_eval(l, st.x(), st.y());
    for (int k = 0; k < 3; ++k) {
      const double coeff = field.coeffs(k * nb + l, cell);
      w[k] += coeff * phi.value;
      ws[k] += coeff * phi.ds;
      wt[k] += coeff * phi.dt;
    }
  }
  if (!(w[0] > 0)) raise(ErrorKind::NonPositiveDepth, "depth must be positive");
  const double inv_half = 1 / solver.half_width();
  const Vec3<double> wx = ws * inv_half, wy = wt * inv_half;
  // Contravariant velocity u = U₂/U₁ and its derivatives by the quotient rule.
  const Vec2<double> vel(w[1] / w[0], w[2] / w[0]);
  const Vec2<double> vel_x((wx[1] * w[0] - w[1] * wx[0]) / (w[0] * w[0]), (wx[2] * w[0] - w[2] * wx[0]) / (w[0] * w[0]));
  const Vec2<double> vel_y((wy[1] * w[0] - w[1] * wy[0]) / (w[0] * w[0]), (wy[2] * w[0] - w[2] * wy[0]) / (w[0] * w[0]));
  const PanelPoint<double> p = cell_point(solver.mesh(), cell, st);
  const double radius = solver.problem().constants.radius;
  const MetricData<double> m = metric_at(p, radius);
  const MetricDerivatives<double> dm = metric_derivatives_at(p, radius);
  const Mat2<double> cov = m.cov;
  // ∂G = −G ∂(G⁻¹) G.
  const Mat2<double> cov_x = -cov * dm.dinv_dx * cov, cov_y = -cov * dm.dinv_dy * cov;
  const Vec2<double> lower_x = cov_x * vel + cov * vel_x;  // ∂_x (û, v̂)
  const Vec2<double> lower_y = cov_y * vel + cov * vel_y;  // ∂_y (û, v̂)
  return (lower_x.y() - lower_y.x()) / m.jac;
}

Conserved conserved(const DGSolver<double>& solver, const DGField<double>& field) {
  const Mesh& mesh = solver.mesh();
  const double g = solver.problem().constants.g, area = solver.half_width() * solver.half_width();
  Conserved out;
  for (int c = 0; c < mesh.cells(); ++c) {
    double mass = 0, energy = 0, enstrophy = 0;
    for (int q = 0; q < solver.volume_nodes(); ++q) {
      const double w = solver.volume_weights()[q];
      const double jac = solver.node_metric(c, q).jac;
      const SphericalState<double> s = solver.node_spherical(field, c, q);
      const double b = solver.node_topography(c, q);
      mass += w * solver.node_state(field, c, q)[0];
      energy += w * jac * (0.5 * s.h * (s.u * s.u + s.v * s.v) + 0.5 * g * ((s.h + b) * (s.h + b) - b * b));
      const double absolute = vorticity(solver, field, c, solver.node_coords(q)) + solver.node_coriolis(c, q);
      enstrophy += w * jac * absolute * absolute / (2 * s.h);
    }
    out.mass += area * mass;
    out.energy += area * energy;
    out.enstrophy += area * enstrophy;
  }
  return out;
}

double area_mean(const Mesh& mesh, double radius, const std::function<double(const SphericalPoint<double>&)>& q,
                 int points) {
  const Rule1D<double> rule = gauss_lobatto<double>(points);
  const int m = static_cast<int>(rule.nodes.size());
  double num = 0, den = 0;
  for (int c = 0; c < mesh.cells(); ++c)
    for (int b = 0; b < m; ++b)
      for (int a = 0; a < m; ++a) {
        const PanelPoint<double> p = cell_point(mesh, c, Vec2<double>(rule.nodes[a], rule.nodes[b]));
        const double w = rule.weights[a] * rule.weights[b] * metric_at(p, radius).jac;
        num += w * q(panel_to_sphere(p));
        den += w;
      }
  return num / den;
}

}  // namespace swe
