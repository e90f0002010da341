#include "swe/checks.hpp"

#include "swe/bicharacteristics.hpp"
#include "swe/evolution_operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace swe {

namespace {

constexpr double kRadius = 6.37122e6;
constexpr double kGravity = 9.80616;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }

  /// Generic, near-isotropic (gaps down to 1e-13) and exactly isotropic metrics, per unit λ.
  Mat2<double> metric() {
    const double pick = uniform(0, 1);
    if (pick < 0.1) return Mat2<double>::Identity() * uniform(0.5, 2);
    const double a = uniform(0.1, 4), b = pick < 0.3 ? a * (1 + std::pow(10.0, uniform(-13, -4))) : uniform(0.1, 4);
    const double phi = uniform(0, kPi<double>);
    Mat2<double> q;
    q << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return q * Vec2<double>(a, b).asDiagonal() * q.transpose();
  }

  /// Depth and contravariant velocity of metric speed up to mach·c.
  Primitive<double> state(const Mat2<double>& ginv, double mach) {
    const double h = uniform(200, 10000), c = std::sqrt(kGravity * h);
    const double speed = uniform(0, mach) * c, dir = uniform(0, kTwoPi<double>);
    const Mat2<double> half = Eigen::LLT<Mat2<double>>(ginv).matrixL();
    const Vec2<double> uv = half * Vec2<double>(speed * std::cos(dir), speed * std::sin(dir));
    return {h, uv.x(), uv.y()};
  }

 private:
  std::mt19937_64 gen_;
};

template <class Fn>
double simpson_rec(const Fn& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b), flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= std::max(15 * tol, 1e-15 * (std::abs(left) + std::abs(right))))
    return left + right + delta / 15;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

/// Adaptive Simpson on 16 pre-split panels with Richardson correction; tol absolute.
template <class Fn>
double simpson(const Fn& f, double a, double b, double tol) {
  constexpr int kSplit = 16;
  double sum = 0;
  for (int i = 0; i < kSplit; ++i) {
    const double lo = a + (b - a) * i / kSplit, hi = a + (b - a) * (i + 1) / kSplit;
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    sum += simpson_rec(f, lo, hi, fa, fm, fb, (hi - lo) / 6 * (fa + 4 * fm + fb), tol / kSplit, 40);
  }
  return sum;
}

double k_theta(const Mat2<double>& gi, double th) {
  const Vec2<double> n(std::cos(th), std::sin(th));
  return std::sqrt(n.dot(gi * n));
}

// Sector integrands in ThetaAntiderivatives field order.
std::array<double, 8> integrands(const Mat2<double>& gi, double th) {
  const Vec2<double> n(std::cos(th), std::sin(th));
  const double k = k_theta(gi, th);
  const Vec2<double> gv = gi * n / k;
  return {n.x() / k, n.y() / k, gv.x() * n.x() / k, gv.x() * n.y() / k, gv.y() * n.x() / k, gv.y() * n.y() / k,
          gv.x(), gv.y()};
}

std::array<double, 8> as_array(const ThetaAntiderivatives<double>& t) {
  return {t.cos_k, t.sin_k, t.gc_cos_k, t.gc_sin_k, t.gs_cos_k, t.gs_sin_k, t.gc, t.gs};
}

// Crossing angles of the retreating cone direction with each ray: sign scan then bisection.
std::vector<double> dense_crossings(const Primitive<double>& tilde, const Mat2<double>& ginv,
                                    std::span<const Vec2<double>> rays, int scan) {
  const double c = std::sqrt(kGravity * tilde.h);
  auto retreat = [&](double th) {
    const Vec2<double> n(std::cos(th), std::sin(th)), w = ginv * n;
    return Vec2<double>(c * w / std::sqrt(n.dot(w)) - tilde.velocity());
  };
  std::vector<double> roots;
  for (const Vec2<double>& r0 : rays) {
    const Vec2<double> r = r0.normalized();
    auto f = [&](double th) { return cross2(retreat(th), r); };
    double prev_t = 0, prev_f = f(0);
    for (int i = 1; i <= scan; ++i) {
      const double t = kTwoPi<double> * i / scan, ft = f(t);
      if ((prev_f > 0) != (ft > 0)) {
        double lo = prev_t, hi = t, flo = prev_f;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi), fm = f(mid);
          if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        if (retreat(root).dot(r) > 0) roots.push_back(wrap_angle(root));
      }
      prev_t = t;
      prev_f = ft;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double angle_gap(double a, double b) {
  const double d = std::abs(wrap_angle(a - b));
  return std::min(d, kTwoPi<double> - d);
}

// Worst angle gap between a partition and the oracle; infinite on a count mismatch.
double partition_gap(const SectorPartition<double>& p, const std::vector<double>& oracle) {
  if (oracle.empty()) return p.nhat == 1 ? 0 : INFINITY;
  if (static_cast<int>(oracle.size()) != p.nhat) return INFINITY;
  double worst = 0;
  for (int k = 0; k < p.nhat; ++k) worst = std::max(worst, angle_gap(p.angles[k], oracle[k]));
  return worst;
}

Problem<double> rest_problem(double href) {
  Problem<double> p;
  p.href = href;
  return p;
}

}  // namespace

CheckResult check_j_constants(int samples, std::uint64_t seed) {
  Sampler rng(seed);
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    const Mat2<double> gi = rng.metric();
    const JConstants<double> j = j_constants(gi);
    const double lam_min = gi.eigenvalues().real().minCoeff();
    auto avg = [&](const auto& f) { return simpson(f, 0, kTwoPi<double>, 1e-14) / kTwoPi<double>; };
    auto k2 = [&](double t) { return k_theta(gi, t) * k_theta(gi, t); };
    const double ref[7] = {
        avg([&](double t) { return std::sin(t) * std::cos(t) / k2(t); }),
        avg([&](double t) { return std::sin(t) * std::sin(t) / k2(t); }),
        avg([&](double t) { return std::cos(t) * std::cos(t) / k2(t); }),
        avg([&](double t) { return integrands(gi, t)[3]; }),
        avg([&](double t) { return integrands(gi, t)[2]; }),
        avg([&](double t) { return integrands(gi, t)[5]; }),
        avg([&](double t) { return integrands(gi, t)[4]; })};
    const double got[7] = {j.J1, j.J2, j.J3, j.J4, j.J5, j.J6, j.J7};
    for (int q = 0; q < 3; ++q) worst = std::max(worst, std::abs(got[q] - ref[q]) * lam_min);
    for (int q = 3; q < 7; ++q) worst = std::max(worst, std::abs(got[q] - ref[q]));
  }
  return {"J constants vs adaptive quadrature", worst, 1e-10, samples};
}

CheckResult check_antiderivatives(int samples, std::uint64_t seed) {
  Sampler rng(seed);
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    const Mat2<double> gi = rng.metric();
    const ConeMetric<double> cm = make_cone_metric(gi);
    const double th = rng.uniform(-10, 10), step = 1e-3;
    const std::array<double, 8> want = integrands(gi, th);
    const double scale = std::max(1.0, gi.norm()) * std::max(1.0, 1 / gi.eigenvalues().real().minCoeff());
    for (int q = 0; q < 8; ++q) {
      auto f = [&](double t) { return as_array(theta_antiderivatives(cm, t))[q]; };
      const double got = (-f(th + 2 * step) + 8 * f(th + step) - 8 * f(th - step) + f(th - 2 * step)) / (12 * step);
      worst = std::max(worst, std::abs(got - want[q]) / scale);
    }
  }
  return {"antiderivative derivatives vs integrands", worst, 1e-8, samples};
}

CheckResult check_sector_angles(int samples, std::uint64_t seed) {
  Sampler rng(seed);
  const std::array<Vec2<double>, 4> axes{Vec2<double>(1, 0), Vec2<double>(0, 1), Vec2<double>(-1, 0),
                                         Vec2<double>(0, -1)};
  constexpr int kScan = 20000;
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    if (i % 2 == 0) {
      // Interior: edge pair or vertex rays in a random panel metric.
      const Mat2<double> gi = rng.metric() / (kRadius * kRadius);
      const Primitive<double> w = rng.state(gi, 1.5);
      const std::span<const Vec2<double>> rays =
          i % 4 == 0 ? std::span<const Vec2<double>>(axes) : std::span<const Vec2<double>>(axes.data(), 2);
      worst = std::max(worst, partition_gap(sector_partition(w, gi, rays, kGravity), dense_crossings(w, gi, rays, kScan)));
    } else {
      // Seam: rays of a panel edge in the longitude/latitude chart.
      const bool equatorial = i % 4 == 1;
      const double r = rng.uniform(-kPi<double> / 4 + 1e-3, kPi<double> / 4 - 1e-3);
      const PanelPoint<double> p = equatorial ? PanelPoint<double>{1, r, kPi<double> / 4}
                                              : PanelPoint<double>{5, kPi<double> / 4, r};
      const SphericalPoint<double> s = panel_to_sphere(p);
      const Mat2<double> to_chart = latlon_inverse_metric(s.lat, kRadius).cwiseSqrt() * velocity_matrix_at(p, kRadius);
      const Vec2<double> along = equatorial ? Vec2<double>(1, 0) : Vec2<double>(0, 1);
      const std::array<Vec2<double>, 2> rays{Vec2<double>(to_chart * along), Vec2<double>(-(to_chart * along))};
      const double h = rng.uniform(500, 8000), c = std::sqrt(kGravity * h);
      const Primitive<double> ws{h, rng.uniform(-1.2, 1.2) * c, rng.uniform(-1.2, 1.2) * c};
      const std::span<const Vec2<double>> span(rays);
      const SectorPartition<double> part = sector_angles_panel_boundary(ws, s.lat, span, kGravity, kRadius);
      const Mat2<double> gi = latlon_inverse_metric(s.lat, kRadius);
      worst = std::max(worst, partition_gap(part, dense_crossings(latlon_to_chart(ws, s.lat, kRadius), gi, span, kScan)));
    }
  }
  return {"sector angles vs bisection oracle", worst, 1e-10, samples};
}

CheckResult check_eigensystem(int samples, std::uint64_t seed) {
  Sampler rng(seed);
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    const Mat2<double> gi = rng.metric() / (kRadius * kRadius);
    const Primitive<double> w = rng.state(gi, 2.0);
    const double theta = rng.uniform(0, kTwoPi<double>);
    const EigenSystem<double> e = eigensystem(w, gi, theta, kGravity);
    // Entries carry units: measure L·R − I against Σ|L_ik||R_kj| and A rows by their norms.
    const Mat3<double> lr = e.left * e.right - Mat3<double>::Identity();
    worst = std::max(worst, lr.cwiseQuotient(e.left.cwiseAbs() * e.right.cwiseAbs()).cwiseAbs().maxCoeff());
    const auto [a1, a2] = primitive_matrices(w, gi, kGravity);
    const Mat3<double> a = std::cos(theta) * a1 + std::sin(theta) * a2;
    const Mat3<double> rebuilt = e.right * e.lambda.asDiagonal() * e.left;
    for (int r = 0; r < 3; ++r) worst = std::max(worst, (rebuilt.row(r) - a.row(r)).norm() / a.row(r).norm());
  }
  return {"eigensystem identities", worst, 1e-10, samples};
}

CheckResult check_constant_traces(int samples, std::uint64_t seed) {
  Sampler rng(seed);
  const std::array<Vec2<double>, 4> axes{Vec2<double>(1, 0), Vec2<double>(0, 1), Vec2<double>(-1, 0),
                                         Vec2<double>(0, -1)};
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    SectorTrace<double> tr;
    if (i % 2 == 0) {
      const Mat2<double> gi = rng.metric() / (kRadius * kRadius);
      const Primitive<double> w = rng.state(gi, 1.5);
      const int nrays = i % 4 == 0 ? 4 : 2;
      const SectorPartition<double> part =
          sector_partition(w, gi, std::span<const Vec2<double>>(axes.data(), nrays), kGravity);
      for (auto& t : tr.star) t = w;
      tr.zero = w;
      const Primitive<double> out = leg_operator(tr, part, w, make_cone_metric(gi), kGravity);
      const double vscale = std::sqrt(kGravity * w.h * gi.trace()) + w.velocity().norm();
      worst = std::max({worst, std::abs(out.h - w.h) / w.h, std::abs(out.u - w.u) / vscale,
                        std::abs(out.v - w.v) / vscale});
    } else {
      const double lat = rng.uniform(-1.2, 1.2), h = rng.uniform(200, 10000), c = std::sqrt(kGravity * h);
      const Primitive<double> ws{h, rng.uniform(-1.5, 1.5) * c, rng.uniform(-1.5, 1.5) * c};
      const std::array<Vec2<double>, 3> rays{Vec2<double>(1, 0.2), Vec2<double>(-0.3, 1), Vec2<double>(-0.5, -1)};
      const SectorPartition<double> part =
          sector_angles_panel_boundary(ws, lat, std::span<const Vec2<double>>(rays), kGravity, kRadius);
      for (auto& t : tr.star) t = ws;
      tr.zero = ws;
      const Primitive<double> out = leg_operator_latlon(tr, part, ws, lat, kGravity, kRadius);
      const double vscale = c + ws.velocity().norm();
      worst = std::max({worst, std::abs(out.h - h) / h, std::abs(out.u - ws.u) / vscale,
                        std::abs(out.v - ws.v) / vscale});
    }
  }
  return {"interface operator fixes constant traces", worst, 1e-12, samples};
}

CheckResult check_edge_flux_two_sided(int degree, int n, std::uint64_t seed) {
  Sampler rng(seed);
  const Mesh mesh(n);
  Problem<double> problem;
  problem.href = 2000;
  const DGSolver<double> solver(mesh, degree, problem);
  // Smooth rotating flow plus per-coefficient noise, so the two traces differ everywhere.
  const double u0 = 40;
  DGField<double> field = solver.project([&](const SphericalPoint<double>& s) {
    return SphericalState<double>{3000 - 800 * std::sin(s.lat) * std::sin(s.lat) + 200 * std::cos(s.lon) * std::cos(s.lat),
                                  u0 * std::cos(s.lat) + 10 * std::sin(2 * s.lon), 15 * std::cos(3 * s.lon) * std::cos(s.lat)};
  });
  for (int c = 0; c < field.cells(); ++c)
    for (int r = 1; r < field.coeffs.rows(); ++r)
      if (r % solver.basis() != 0) field.coeffs(r, c) += 0.01 * rng.uniform(-1, 1) * std::abs(field.coeffs(r - r % solver.basis(), c));
  const double radius = problem.constants.radius, g = problem.constants.g;
  const Rule1D<double> rule = gauss_lobatto<double>(degree + 2);
  double worst = 0;
  int count = 0;
  for (int e = 0; e < static_cast<int>(mesh.edges().size()); ++e) {
    const MeshEdge& edge = mesh.edges()[e];
    for (int m = 0; m < degree + 2; ++m) {
      const EdgeFluxPair<double> pair = solver.edge_flux(field, e, m, FluxMode::Leg);
      const SphericalState<double>& s = pair.state;
      const double c = std::sqrt(g * s.h), speed = std::hypot(s.u, s.v);
      const double r = rule.nodes[m];
      double normal_scale = 0;
      for (const auto& [ref, param, side_flux] :
           {std::tuple{edge.a, r, pair.side_a}, std::tuple{edge.b, edge.flip ? -r : r, pair.side_b}}) {
        const Vec2<double> xy = mesh.to_panel(ref.cell, side_point(ref.side, param));
        const PanelPoint<double> p{mesh.cell(ref.cell).panel, xy.x(), xy.y()};
        const MetricData<double> md = metric_at(p, radius);
        const VelocityMatrix<double> a = velocity_matrix_at(p, radius);
        const Vec2<double> nr = side_normal(ref.side);
        // Independent route: the interface state in this cell's own contravariant components.
        const Primitive<double> w = Primitive<double>::from(s.h, Vec2<double>(a.inverse() * s.velocity()));
        const Vec3<double> route = normal_flux(w, md.inv, md.jac, nr, g, problem.href);
        const double ns = (md.jac * a.inverse().transpose() * nr).norm();
        normal_scale = std::max(normal_scale, ns);
        const double mass_scale = s.h * (speed + c) * ns;
        const double mom_scale = (s.h * speed * (speed + c) + 0.5 * g * s.h * s.h) * ns;
        const Vec2<double> dm = a * (side_flux.tail<2>() - route.tail<2>());
        worst = std::max({worst, std::abs(side_flux[0] - route[0]) / mass_scale, dm.norm() / mom_scale});
      }
      const double mass_scale = s.h * (speed + c) * normal_scale;
      const double mom_scale = (s.h * speed * (speed + c) + 0.5 * g * s.h * s.h) * normal_scale;
      const Vec3<double> sum = pair.physical_a + pair.physical_b;
      worst = std::max({worst, std::abs(sum[0]) / mass_scale, sum.tail<2>().norm() / mom_scale});
      ++count;
    }
  }
  return {"two-sided edge flux agreement (K=" + std::to_string(degree) + ")", worst, 1e-11, count};
}

CheckResult check_free_stream(int degree, int n, FluxMode mode) {
  const Mesh mesh(n);
  const double h0 = 5000;
  const DGSolver<double> solver(mesh, degree, rest_problem(h0));
  const DGField<double> field = solver.project([&](const SphericalPoint<double>&) { return SphericalState<double>{h0, 0, 0}; });
  const DGField<double> r = solver.residual(field, 0.0, mode);
  const double measured = r.coeffs.cwiseAbs().maxCoeff() / (field.coeffs.cwiseAbs().maxCoeff() * solver.wave_rate(field));
  return {std::string("free-stream rest state (") + (mode == FluxMode::Leg ? "leg" : "baseline") +
              ", K=" + std::to_string(degree) + ", N=" + std::to_string(n) + ")",
          measured, 1e-11, mesh.cells()};
}

std::vector<CheckResult> property_suite(int samples) {
  std::vector<CheckResult> out{check_j_constants(samples), check_antiderivatives(samples),
                               check_sector_angles(samples), check_eigensystem(samples),
                               check_constant_traces(samples)};
  for (int k = 1; k <= 3; ++k) {
    out.push_back(check_edge_flux_two_sided(k, 3));
    out.push_back(check_free_stream(k, 4, FluxMode::Leg));
    out.push_back(check_free_stream(k, 4, FluxMode::Baseline));
  }
  return out;
}

}  // namespace swe
