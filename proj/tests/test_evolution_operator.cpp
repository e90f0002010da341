#include "doctest.h"
#include "support.hpp"
#include "swe/evolution_operator.hpp"

#include <array>
#include <functional>

using namespace swe;
using swe::test::uniform;

namespace {

constexpr double kR = 6.37122e6;
constexpr double kG = 9.80616;

double k_theta(const Mat2<double>& gi, double th) {
  const Vec2<double> n(std::cos(th), std::sin(th));
  return std::sqrt(n.dot(gi * n));
}

// The eight sector integrands, evaluated straight from their definition.
std::array<double, 8> integrands(const Mat2<double>& gi, double th) {
  const Vec2<double> n(std::cos(th), std::sin(th));
  const double k = k_theta(gi, th);
  const Vec2<double> gvec = gi * n / k;
  return {n.x() / k, n.y() / k, gvec.x() * n.x() / k, gvec.x() * n.y() / k, gvec.y() * n.x() / k,
          gvec.y() * n.y() / k, gvec.x(), gvec.y()};
}

std::array<double, 8> as_array(const ThetaAntiderivatives<double>& t) {
  return {t.cos_k, t.sin_k, t.gc_cos_k, t.gc_sin_k, t.gs_cos_k, t.gs_sin_k, t.gc, t.gs};
}

Mat2<double> random_metric() {
  // Mix generic, near-isotropic and exactly isotropic metrics.
  const double pick = uniform(0, 1);
  if (pick < 0.1) return Mat2<double>::Identity() * uniform(0.5, 2) / (kR * kR);
  if (pick < 0.3) {
    const double a = uniform(0.5, 2), gap = std::pow(10.0, uniform(-13, -4));
    const double phi = uniform(0, kPi<double>);
    Mat2<double> q;
    q << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return q * Vec2<double>(a * (1 + gap), a).asDiagonal() * q.transpose() / (kR * kR);
  }
  return test::random_spd(0.1, 4, 1 / (kR * kR));
}

// Traces: one independent state per sector plus the P trace.
struct Setup {
  ConeMetric<double> cm;
  SectorPartition<double> part;
  SectorTrace<double> trace;
  Primitive<double> tilde;
};

Setup constant_setup(const Mat2<double>& gi, const Primitive<double>& w) {
  Setup s{make_cone_metric(gi), {}, {}, w};
  const std::array<Vec2<double>, 4> rays{Vec2<double>(1, 0), Vec2<double>(0, 1), Vec2<double>(-1, 0),
                                         Vec2<double>(0, -1)};
  s.part = sector_partition(w, gi, std::span<const Vec2<double>>(rays), kG);
  for (auto& t : s.trace.star) t = w;
  s.trace.zero = w;
  return s;
}

Primitive<double> random_state(const Mat2<double>& gi, double mach) {
  const double h = uniform(200, 10000), c = std::sqrt(kG * h);
  const double sp = uniform(0, mach) * c, dir = uniform(0, kTwoPi<double>);
  const Mat2<double> half = Eigen::LLT<Mat2<double>>(gi).matrixL();
  const Vec2<double> uv = half * Vec2<double>(sp * std::cos(dir), sp * std::sin(dir));
  return {h, uv.x(), uv.y()};
}

}  // namespace

TEST_CASE("J constants at a unit-sphere panel centre") {
  const JConstants<double> j = j_constants(Mat2<double>(Mat2<double>::Identity()));
  CHECK(j.J1 == 0);
  CHECK(j.J2 == 0.5);
  CHECK(j.J3 == 0.5);
  const JConstants<double> jr = j_constants(Mat2<double>(Mat2<double>::Identity() / (kR * kR)));
  CHECK(test::rel_err(jr.J2, kR * kR / 2) < 1e-15);
}

TEST_CASE("J constants match adaptive quadrature of their definitions") {
  for (int i = 0; i < 200; ++i) {
    const Mat2<double> gi = random_metric();
    const JConstants<double> j = j_constants(gi);
    auto avg = [&](const std::function<double(double)>& f) { return test::simpson(f, 0, kTwoPi<double>, 1e-15 / kTwoPi<double>) / kTwoPi<double>; };
    // Normalise the integrands to O(1) so the tolerance is absolute in integrand units.
    const double scale = 1 / (gi.trace() / 2);
    auto k2 = [&](double t) { const double k = k_theta(gi, t); return k * k; };
    const double j1 = scale * avg([&](double t) { return std::sin(t) * std::cos(t) / (scale * k2(t)); });
    const double j2 = scale * avg([&](double t) { return std::sin(t) * std::sin(t) / (scale * k2(t)); });
    const double j3 = scale * avg([&](double t) { return std::cos(t) * std::cos(t) / (scale * k2(t)); });
    const double norm = 1 / gi.eigenvalues().real().minCoeff();
    CHECK(std::abs(j.J1 - j1) < 1e-10 * norm);
    CHECK(std::abs(j.J2 - j2) < 1e-10 * norm);
    CHECK(std::abs(j.J3 - j3) < 1e-10 * norm);
    // J4..J7 from their own integrands.
    const double j4 = avg([&](double t) { return integrands(gi, t)[3]; });
    const double j5 = avg([&](double t) { return integrands(gi, t)[2]; });
    const double j6 = avg([&](double t) { return integrands(gi, t)[5]; });
    const double j7 = avg([&](double t) { return integrands(gi, t)[4]; });
    CHECK(std::abs(j.J4 - j4) < 1e-10);
    CHECK(std::abs(j.J5 - j5) < 1e-10);
    CHECK(std::abs(j.J6 - j6) < 1e-10);
    CHECK(std::abs(j.J7 - j7) < 1e-10);
    CHECK(std::abs(j.J5 + j.J6 - 1) < 1e-12);
  }
}

TEST_CASE("J4..J7 reductions agree with full-period closed-form sector integrals") {
  for (int i = 0; i < 1000; ++i) {
    const Mat2<double> gi = random_metric();
    const ConeMetric<double> cm = make_cone_metric(gi);
    const double t0 = uniform(0, kTwoPi<double>);
    const SectorIntegrals<double> si = sector_integrals(cm, t0, t0 + kTwoPi<double>);
    CHECK(std::abs(si.integral.gc_sin_k / kTwoPi<double> - cm.J.J4) < 1e-12);
    CHECK(std::abs(si.integral.gc_cos_k / kTwoPi<double> - cm.J.J5) < 1e-12);
    CHECK(std::abs(si.integral.gs_sin_k / kTwoPi<double> - cm.J.J6) < 1e-12);
    CHECK(std::abs(si.integral.gs_cos_k / kTwoPi<double> - cm.J.J7) < 1e-12);
    for (double jmp : si.jump) CHECK(std::abs(jmp) < 1e-12 * std::pow(gi.norm(), 1.5));
  }
}

TEST_CASE("metric eigen-decomposition reassembles the metric") {
  for (int i = 0; i < 1000; ++i) {
    const Mat2<double> gi = random_metric();
    const MetricEigen<double> e = metric_eigen(gi);
    CHECK(e.lam1 >= e.lam2);
    CHECK(e.lam2 > 0);
    const Mat2<double> rebuilt = e.frame * Vec2<double>(e.lam1, e.lam2).asDiagonal() * e.frame.transpose();
    CHECK((rebuilt - gi).norm() < 1e-12 * gi.norm());
  }
}

TEST_CASE("isotropic eigenframe antiderivative of sin²/K²") {
  const double lam = 1.7;
  const ConeMetric<double> cm = make_cone_metric(Mat2<double>(Mat2<double>::Identity() * lam));
  for (double th : {0.0, 0.3, 1.9, 4.4, 7.0}) {
    const PsiAntiderivatives<double> p = psi_antiderivatives(cm, th);
    CHECK(std::abs(p.pss - (th - std::sin(th) * std::cos(th)) / (2 * lam)) < 1e-15);
    CHECK(std::abs(p.pcc - (th + std::sin(th) * std::cos(th)) / (2 * lam)) < 1e-15);
  }
}

TEST_CASE("antiderivatives differentiate to their integrands") {
  for (int i = 0; i < 1000; ++i) {
    const Mat2<double> gi = random_metric() * kR * kR;
    const ConeMetric<double> cm = make_cone_metric(gi);
    const double th = uniform(-10, 10);
    const std::array<double, 8> want = integrands(gi, th);
    for (int q = 0; q < 8; ++q) {
      const double got = test::central_diff5([&](double t) { return as_array(theta_antiderivatives(cm, t))[q]; }, th, 1e-3);
      const double scale = std::max(1.0, gi.norm()) * std::max(1.0, 1 / gi.eigenvalues().real().minCoeff());
      CHECK(std::abs(got - want[q]) < 1e-8 * scale);
    }
  }
}

TEST_CASE("antiderivatives are continuous across the quarter turns") {
  for (int i = 0; i < 200; ++i) {
    const Mat2<double> gi = random_metric() * kR * kR;
    const ConeMetric<double> cm = make_cone_metric(gi);
    for (double base : {kPi<double> / 2, 3 * kPi<double> / 2, kPi<double>, kTwoPi<double>}) {
      const double at = base + cm.eig.phiG;
      const auto lo = as_array(theta_antiderivatives(cm, at - 1e-12));
      const auto hi = as_array(theta_antiderivatives(cm, at + 1e-12));
      for (int q = 0; q < 8; ++q) CHECK(std::abs(hi[q] - lo[q]) < 1e-10);
    }
  }
}

TEST_CASE("sector integrals match adaptive quadrature") {
  for (int i = 0; i < 300; ++i) {
    const Mat2<double> gi = random_metric() * kR * kR;
    const ConeMetric<double> cm = make_cone_metric(gi);
    const double a = uniform(0, kTwoPi<double>), b = a + uniform(0, kTwoPi<double>);
    const auto got = as_array(sector_integrals(cm, a, b).integral);
    const double scale = std::max(1.0, gi.norm()) * std::max(1.0, 1 / gi.eigenvalues().real().minCoeff());
    for (int q = 0; q < 8; ++q) {
      const double ref = test::simpson([&](double t) { return integrands(gi, t)[q] / scale; }, a, b, 1e-14) * scale;
      CHECK(std::abs(got[q] - ref) < 1e-10 * scale);
    }
  }
}

TEST_CASE("rest state with equal traces is returned unchanged to rounding") {
  const Mat2<double> gi = Mat2<double>::Identity() / (kR * kR);
  Setup s = constant_setup(gi, Primitive<double>{1234.5, 0, 0});
  const Primitive<double> out = leg_operator(s.trace, s.part, s.tilde, s.cm, kG);
  CHECK(test::rel_err(out.h, 1234.5) < 4e-16);
  // Full-period sums of periodic antiderivatives cancel to one ulp of the wave speed.
  const double vscale = std::sqrt(kG * 1234.5) / kR;
  CHECK(std::abs(out.u) < 1e-15 * vscale);
  CHECK(std::abs(out.v) < 1e-15 * vscale);
}

TEST_CASE("constant traces are a fixed point of the evolution operator") {
  for (int i = 0; i < 1000; ++i) {
    const Mat2<double> gi = random_metric();
    const Primitive<double> w = random_state(gi, 1.5);
    Setup s = constant_setup(gi, w);
    const Primitive<double> out = leg_operator(s.trace, s.part, s.tilde, s.cm, kG);
    const double vscale = std::sqrt(kG * w.h * gi.trace()) + w.velocity().norm();
    CHECK(test::rel_err(out.h, w.h) < 1e-12);
    CHECK(std::abs(out.u - w.u) < 1e-12 * vscale);
    CHECK(std::abs(out.v - w.v) < 1e-12 * vscale);
  }
}

TEST_CASE("lon/lat variant: constant traces are a fixed point") {
  for (int i = 0; i < 1000; ++i) {
    const double lat = uniform(-1.2, 1.2);
    const double h = uniform(200, 10000), c = std::sqrt(kG * h);
    const Primitive<double> ws{h, uniform(-1.5, 1.5) * c, uniform(-1.5, 1.5) * c};
    const std::array<Vec2<double>, 3> rays{Vec2<double>(1, 0.2), Vec2<double>(-0.3, 1), Vec2<double>(-0.5, -1)};
    const SectorPartition<double> part =
        sector_angles_panel_boundary(ws, lat, std::span<const Vec2<double>>(rays), kG, kR);
    SectorTrace<double> tr;
    for (auto& t : tr.star) t = ws;
    tr.zero = ws;
    const Primitive<double> out = leg_operator_latlon(tr, part, ws, lat, kG, kR);
    CHECK(test::rel_err(out.h, h) < 1e-12);
    CHECK(std::abs(out.u - ws.u) < 1e-12 * (c + ws.velocity().norm()));
    CHECK(std::abs(out.v - ws.v) < 1e-12 * (c + ws.velocity().norm()));
  }
}

TEST_CASE("panel centre vertex at rest returns the mean depth") {
  const Mat2<double> gi = Mat2<double>::Identity() / (kR * kR);
  Setup s = constant_setup(gi, Primitive<double>{1000, 0, 0});
  REQUIRE(s.part.nhat == 4);
  const double hs[4] = {1010, 990, 1003, 997.5};
  for (int i = 0; i < 4; ++i) s.trace.star[i] = {hs[i], 0, 0};
  const Primitive<double> out = leg_operator(s.trace, s.part, s.tilde, s.cm, kG);
  CHECK(std::abs(out.h - 0.25 * (hs[0] + hs[1] + hs[2] + hs[3])) < 1e-11);
}

TEST_CASE("planar edge at a panel centre reproduces the closed-form two-state operator") {
  const Mat2<double> gi = Mat2<double>::Identity() / (kR * kR);
  const double h0 = 1000, c = std::sqrt(kG * h0);
  const Primitive<double> tilde{h0, 0, 0};
  const SectorPartition<double> part = sector_angles_edge_interior(tilde, gi, EdgeOrientation::YNormal, kG);
  REQUIRE(part.nhat == 2);
  // Sector (0, π) retreats into the upper cell.
  const Primitive<double> up{1004, 0, 3.0 / kR}, low{996, 0, -1.0 / kR};
  SectorTrace<double> tr;
  tr.star[0] = up;
  tr.star[1] = low;
  tr.zero = Primitive<double>{h0, 0, 0.5 * (up.v + low.v)};
  const Primitive<double> out = leg_operator(tr, part, tilde, make_cone_metric(gi), kG);
  const double dvs = kR * (up.v - low.v);
  CHECK(std::abs(out.h - (0.5 * (up.h + low.h) - 2 * c / (kPi<double> * kG) * dvs)) < 1e-10);
  const double vs = kR * out.v;
  CHECK(std::abs(vs - (0.5 * kR * (up.v + low.v) - 2 * kG / (kPi<double> * c) * (up.h - low.h))) < 1e-10);
}

TEST_CASE("panel-centre operator is equivariant under quarter-turn rotation") {
  const Mat2<double> gi = Mat2<double>::Identity() / (kR * kR);
  Mat2<double> rot;
  rot << 0, -1, 1, 0;
  for (int i = 0; i < 100; ++i) {
    const Primitive<double> tilde{uniform(500, 5000), 0, 0};
    const ConeMetric<double> cm = make_cone_metric(gi);
    const SectorPartition<double> part = sector_angles_vertex(tilde, gi, kG);
    REQUIRE(part.nhat == 4);
    SectorTrace<double> tr, rotated;
    for (int k = 0; k < 4; ++k) {
      tr.star[k] = {tilde.h * uniform(0.95, 1.05), uniform(-3, 3) / kR, uniform(-3, 3) / kR};
    }
    tr.zero = {tilde.h, uniform(-1, 1) / kR, uniform(-1, 1) / kR};
    for (int k = 0; k < 4; ++k) rotated.star[(k + 1) % 4] = Primitive<double>::from(tr.star[k].h, rot * tr.star[k].velocity());
    rotated.zero = Primitive<double>::from(tr.zero.h, rot * tr.zero.velocity());
    const Primitive<double> a = leg_operator(tr, part, tilde, cm, kG);
    const Primitive<double> b = leg_operator(rotated, part, tilde, cm, kG);
    CHECK(std::abs(a.h - b.h) < 1e-10);
    const Vec2<double> ra = rot * a.velocity();
    CHECK((ra - b.velocity()).norm() * kR < 1e-10);
  }
}

TEST_CASE("equatorial lon/lat operator coincides with the panel-centre operator") {
  for (int i = 0; i < 100; ++i) {
    const double h = uniform(500, 5000), c = std::sqrt(kG * h);
    const Primitive<double> tilde_s{h, uniform(-0.5, 0.5) * c, uniform(-0.5, 0.5) * c};
    const std::array<Vec2<double>, 2> rays{Vec2<double>(0, 1), Vec2<double>(0, -1)};
    const SectorPartition<double> part = sector_angles_panel_boundary(tilde_s, 0.0, std::span<const Vec2<double>>(rays), kG, kR);
    SectorTrace<double> tr;
    for (int k = 0; k < part.nhat; ++k) tr.star[k] = {h * uniform(0.95, 1.05), uniform(-20, 20), uniform(-20, 20)};
    tr.zero = tilde_s;
    const Primitive<double> ll = leg_operator_latlon(tr, part, tilde_s, 0.0, kG, kR);
    SectorTrace<double> chart;
    for (int k = 0; k < part.nhat; ++k) chart.star[k] = {tr.star[k].h, tr.star[k].u / kR, tr.star[k].v / kR};
    chart.zero = {tr.zero.h, tr.zero.u / kR, tr.zero.v / kR};
    const Mat2<double> gi = Mat2<double>::Identity() / (kR * kR);
    const Primitive<double> ref =
        leg_operator(chart, part, Primitive<double>{h, tilde_s.u / kR, tilde_s.v / kR}, make_cone_metric(gi), kG);
    CHECK(std::abs(ll.h - ref.h) < 1e-10);
    CHECK(std::abs(ll.u - kR * ref.u) < 1e-9);
    CHECK(std::abs(ll.v - kR * ref.v) < 1e-9);
  }
}

TEST_CASE("lon/lat operator returns the trace mean for a symmetric depth jump at rest") {
  for (double lat : {0.0, 0.4, -0.9}) {
    const Primitive<double> rest{1000, 0, 0};
    const std::array<Vec2<double>, 2> rays{Vec2<double>(1, 0), Vec2<double>(-1, 0)};
    const SectorPartition<double> part = sector_angles_panel_boundary(rest, lat, std::span<const Vec2<double>>(rays), kG, kR);
    REQUIRE(part.nhat == 2);
    SectorTrace<double> tr;
    tr.star[0] = {1010, 0, 0};
    tr.star[1] = {990, 0, 0};
    tr.zero = rest;
    const Primitive<double> out = leg_operator_latlon(tr, part, rest, lat, kG, kR);
    CHECK(std::abs(out.h - 1000) < 1e-10);
  }
  const SectorTrace<double> tr{};
  CHECK_THROWS_AS(leg_operator_latlon(tr, SectorPartition<double>{}, Primitive<double>{1, 0, 0}, 1.5707960, kG, kR), Error);
}

TEST_CASE("physical edge flux") {
  const Vec2<double> n(0.6, 0.8);
  const Vec3<double> rest = edge_physical_flux(Primitive<double>{100, 0, 0}, n, kG);
  CHECK(rest[0] == 0);
  CHECK(std::abs(rest[1] - 0.5 * kG * 1e4 * 0.6) < 1e-9);
  CHECK(std::abs(rest[2] - 0.5 * kG * 1e4 * 0.8) < 1e-9);
  for (int i = 0; i < 100; ++i) {
    const Primitive<double> s{uniform(10, 1e4), uniform(-50, 50), uniform(-50, 50)};
    const Vec2<double> m(uniform(-1, 1), uniform(-1, 1));
    CHECK((edge_physical_flux(s, m, kG) + edge_physical_flux(s, Vec2<double>(-m), kG)).norm() < 1e-9);
  }
}

TEST_CASE("degenerate metrics are rejected") {
  Mat2<double> bad;
  bad << 1, 1, 1, 1;
  CHECK_THROWS_AS(make_cone_metric(bad), Error);
}
