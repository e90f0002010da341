#pragma once

// The τ→0⁺ local evolution operator E_{h,0}. All θ-integrals are closed form:
// in the eigenframe of G̃⁻¹ (ψ = θ − φ_G, eigenvalues a ≥ b) every integrand is a
// rational or algebraic function of cos ψ, sin ψ whose antiderivative is written
// below in a form that stays continuous on the whole real line and loses no
// digits as a → b.
//
// Scaling: D = det G̃ (= Λ̃²) carries the dimension of the cone potentials; on the
// unit sphere at a panel centre D = 1 and J₂ = J₃ = 1/2.

#include "swe/bicharacteristics.hpp"
#include "swe/common.hpp"
#include "swe/swe_core.hpp"

#include <array>
#include <cmath>

namespace swe {

namespace detail {

// x ↦ f(x)/x with the removable singularity filled in by a short series.
template <std::floating_point Scalar>
Scalar atanc(Scalar z) {
  if (std::abs(z) < Scalar(1e-4)) { const Scalar z2 = z * z; return 1 - z2 / 3 + z2 * z2 / 5; }
  return std::atan(z) / z;
}
template <std::floating_point Scalar>
Scalar asinc(Scalar z) {
  if (std::abs(z) < Scalar(1e-4)) { const Scalar z2 = z * z; return 1 + z2 / 6 + 3 * z2 * z2 / 40; }
  return std::asin(z) / z;
}
template <std::floating_point Scalar>
Scalar asinhc(Scalar z) {
  if (std::abs(z) < Scalar(1e-4)) { const Scalar z2 = z * z; return 1 - z2 / 6 + 3 * z2 * z2 / 40; }
  return std::asinh(z) / z;
}
template <std::floating_point Scalar>
Scalar log1pc(Scalar z) {
  if (std::abs(z) < Scalar(1e-4)) return 1 - z / 2 + z * z / 3 - z * z * z / 4;
  return std::log1p(z) / z;
}

}  // namespace detail

template <std::floating_point Scalar>
struct MetricEigen {
  Scalar lam1 = 0;  ///< larger eigenvalue of G̃⁻¹
  Scalar lam2 = 0;
  Scalar phiG = 0;  ///< angle of the lam1 eigenvector
  Mat2<Scalar> frame;  ///< columns: eigenvectors for lam1, lam2
};

template <std::floating_point Scalar>
MetricEigen<Scalar> metric_eigen(const Mat2<Scalar>& ginv) {
  const Scalar a = ginv(0, 0), b = ginv(1, 1), c = ginv(0, 1);
  MetricEigen<Scalar> e;
  const Scalar half_gap = Scalar(0.5) * std::hypot(a - b, 2 * c);
  e.lam1 = Scalar(0.5) * (a + b) + half_gap;
  e.lam2 = std::min((a * b - c * c) / e.lam1, e.lam1);
  if (!(e.lam2 > 0)) raise(ErrorKind::SingularSystem, "metric is not positive definite");
  e.phiG = Scalar(0.5) * std::atan2(2 * c, a - b);
  const Scalar cp = std::cos(e.phiG), sp = std::sin(e.phiG);
  e.frame << cp, -sp, sp, cp;
  return e;
}

template <std::floating_point Scalar>
struct JConstants {
  Scalar J1 = 0, J2 = 0, J3 = 0, J4 = 0, J5 = 0, J6 = 0, J7 = 0;
  Scalar Htilde = 0;  ///< (g¹¹ − g²²)² + 4(g¹²)²
};

/// J₁ = ⟨cs/K²⟩, J₂ = ⟨s²/K²⟩, J₃ = ⟨c²/K²⟩ over the full circle, and J₄..J₇ by reduction.
template <std::floating_point Scalar>
JConstants<Scalar> j_constants(const Mat2<Scalar>& ginv) {
  const Scalar g11 = ginv(0, 0), g12 = ginv(0, 1), g22 = ginv(1, 1);
  JConstants<Scalar> j;
  j.Htilde = (g11 - g22) * (g11 - g22) + 4 * g12 * g12;
  const Scalar tr = g11 + g22;
  const Scalar det = g11 * g22 - g12 * g12;
  if (j.Htilde == 0) {
    j.J1 = 0;
    j.J2 = j.J3 = 1 / tr;
  } else if (j.Htilde > Scalar(1e-2) * tr * tr) {
    const Scalar lam = 1 / std::sqrt(det);  // Λ̃
    j.J1 = g12 * (2 - tr * lam) / j.Htilde;
    j.J2 = ((g11 * g11 - g11 * g22 + 2 * g12 * g12) * lam + g22 - g11) / j.Htilde;
    j.J3 = ((g22 * g22 - g11 * g22 + 2 * g12 * g12) * lam + g11 - g22) / j.Htilde;
  } else {
    // Near-isotropic: the printed forms lose ~log10(tr²/H̃) digits. The same averages
    // are the entries of the resolvent (G̃⁻¹ + sqrt(det G̃⁻¹) I)⁻¹, which has no 1/H̃.
    const Scalar s = std::sqrt(det);
    const Scalar denom = s * (tr + 2 * s);
    j.J1 = -g12 / denom;
    j.J2 = (g11 + s) / denom;
    j.J3 = (g22 + s) / denom;
  }
  j.J4 = g11 * j.J1 + g12 * j.J2;
  j.J5 = g11 * j.J3 + g12 * j.J1;
  j.J6 = g12 * j.J1 + g22 * j.J2;
  j.J7 = g12 * j.J3 + g22 * j.J1;
  return j;
}

/// Antiderivatives in θ of the eight sector integrands.
template <std::floating_point Scalar>
struct ThetaAntiderivatives {
  Scalar cos_k = 0, sin_k = 0;             ///< cosθ/K, sinθ/K
  Scalar gc_cos_k = 0, gc_sin_k = 0;       ///< G_c cosθ/K, G_c sinθ/K
  Scalar gs_cos_k = 0, gs_sin_k = 0;       ///< G_s cosθ/K, G_s sinθ/K
  Scalar gc = 0, gs = 0;                   ///< G_c, G_s
};

/// Eigenframe quantities reused by every antiderivative evaluation at one node.
template <std::floating_point Scalar>
struct ConeMetric {
  Mat2<Scalar> ginv;
  Mat2<Scalar> gcov;
  Scalar det = 0;  ///< D = det G̃
  MetricEigen<Scalar> eig;
  Scalar k = 1;      ///< sqrt(lam2/lam1)
  Scalar delta = 0;  ///< sqrt((lam1 − lam2)/lam1)
  Scalar eps = 0;    ///< sqrt((lam1 − lam2)/lam2)
  JConstants<Scalar> J;
  Mat2<Scalar> implicit_inverse;  ///< inverse of the 2×2 velocity system
};

template <std::floating_point Scalar>
ConeMetric<Scalar> make_cone_metric(const Mat2<Scalar>& ginv) {
  ConeMetric<Scalar> cm;
  cm.ginv = ginv;
  const Scalar idet = ginv.determinant();
  if (!(idet > 0)) raise(ErrorKind::SingularSystem, "metric is not positive definite");
  cm.gcov << ginv(1, 1) / idet, -ginv(0, 1) / idet, -ginv(0, 1) / idet, ginv(0, 0) / idet;
  cm.det = 1 / idet;
  cm.eig = metric_eigen(ginv);
  const Scalar a = cm.eig.lam1, b = cm.eig.lam2;
  cm.k = std::sqrt(b / a);
  cm.delta = std::sqrt(std::max(Scalar(0), (a - b) / a));
  cm.eps = std::sqrt(std::max(Scalar(0), (a - b) / b));
  cm.J = j_constants(ginv);
  const JConstants<Scalar>& j = cm.J;
  const Scalar c11 = cm.gcov(0, 0), c12 = cm.gcov(0, 1), c22 = cm.gcov(1, 1);
  const Scalar alpha1 = c12 * j.J1 - c11 * j.J2, alpha2 = c22 * j.J1 - c12 * j.J2;
  const Scalar beta1 = c11 * j.J1 - c12 * j.J3, beta2 = c12 * j.J1 - c22 * j.J3;
  Mat2<Scalar> m;
  m << 1 + alpha1 / cm.det, alpha2 / cm.det, beta1 / cm.det, 1 + beta2 / cm.det;
  const Scalar mdet = m.determinant();
  if (std::abs(mdet) < Scalar(1e-14)) raise(ErrorKind::SingularSystem, "degenerate evolution-operator system");
  cm.implicit_inverse << m(1, 1) / mdet, -m(0, 1) / mdet, -m(1, 0) / mdet, m(0, 0) / mdet;
  return cm;
}

/// Eigenframe antiderivatives at ψ: ∫c²/K², ∫s²/K², ∫cs/K², ∫c/K, ∫s/K with K² = a c² + b s².
template <std::floating_point Scalar>
struct PsiAntiderivatives {
  Scalar pcc = 0, pss = 0, psc = 0, qc = 0, qs = 0;
};

template <std::floating_point Scalar>
PsiAntiderivatives<Scalar> psi_antiderivatives(const ConeMetric<Scalar>& cm, Scalar psi) {
  const Scalar a = cm.eig.lam1, k = cm.k;
  const Scalar c = std::cos(psi), s = std::sin(psi);
  const Scalar q = s * c / (c * c + k * s * s);
  const Scalar at = detail::atanc((k - 1) * q);
  PsiAntiderivatives<Scalar> p;
  p.pcc = (psi + k * q * at) / (a * (1 + k));
  p.pss = (psi - q * at) / (a * k * (1 + k));
  p.psc = s * s * detail::log1pc((k * k - 1) * s * s) / (2 * a);
  p.qc = s / std::sqrt(a) * detail::asinc(cm.delta * s);
  p.qs = -c / std::sqrt(cm.eig.lam2) * detail::asinhc(cm.eps * c);
  return p;
}

template <std::floating_point Scalar>
ThetaAntiderivatives<Scalar> theta_antiderivatives(const ConeMetric<Scalar>& cm, Scalar theta) {
  const PsiAntiderivatives<Scalar> p = psi_antiderivatives(cm, theta - cm.eig.phiG);
  const Mat2<Scalar>& e = cm.eig.frame;
  Mat2<Scalar> m;
  m << p.pcc, p.psc, p.psc, p.pss;
  const Vec2<Scalar> qv(p.qc, p.qs);
  const Vec2<Scalar> lam(cm.eig.lam1, cm.eig.lam2);
  const Vec2<Scalar> nk = e * qv;
  const Mat2<Scalar> gnn = e * lam.asDiagonal() * m * e.transpose();
  const Vec2<Scalar> gk = e * lam.asDiagonal() * qv;
  ThetaAntiderivatives<Scalar> t;
  t.cos_k = nk.x();
  t.sin_k = nk.y();
  t.gc_cos_k = gnn(0, 0);
  t.gc_sin_k = gnn(0, 1);
  t.gs_cos_k = gnn(1, 0);
  t.gs_sin_k = gnn(1, 1);
  t.gc = gk.x();
  t.gs = gk.y();
  return t;
}

/// φ₁..φ₆ of the cone-boundary terms, w = G̃⁻¹n, K² = n·w.
template <std::floating_point Scalar>
std::array<Scalar, 6> cone_potentials(const Mat2<Scalar>& ginv, Scalar theta) {
  const Vec2<Scalar> n(std::cos(theta), std::sin(theta));
  const Vec2<Scalar> w = ginv * n;
  const Scalar k = std::sqrt(n.dot(w));
  return {k * w.y(), k * w.x(), w.x() * w.y(), w.x() * w.x(), w.y() * w.y(), w.x() * w.y()};
}

template <std::floating_point Scalar>
struct SectorIntegrals {
  ThetaAntiderivatives<Scalar> integral;  ///< definite integrals over (θa, θb)
  std::array<Scalar, 6> jump{};           ///< φᵢ(θb) − φᵢ(θa)
};

template <std::floating_point Scalar>
ThetaAntiderivatives<Scalar> operator-(const ThetaAntiderivatives<Scalar>& hi, const ThetaAntiderivatives<Scalar>& lo) {
  return {hi.cos_k - lo.cos_k,       hi.sin_k - lo.sin_k,       hi.gc_cos_k - lo.gc_cos_k,
          hi.gc_sin_k - lo.gc_sin_k, hi.gs_cos_k - lo.gs_cos_k, hi.gs_sin_k - lo.gs_sin_k,
          hi.gc - lo.gc,             hi.gs - lo.gs};
}

template <std::floating_point Scalar>
SectorIntegrals<Scalar> sector_integrals(const ConeMetric<Scalar>& cm, Scalar theta_a, Scalar theta_b) {
  SectorIntegrals<Scalar> si;
  si.integral = theta_antiderivatives(cm, theta_b) - theta_antiderivatives(cm, theta_a);
  const auto pa = cone_potentials(cm.ginv, theta_a), pb = cone_potentials(cm.ginv, theta_b);
  for (int i = 0; i < 6; ++i) si.jump[i] = pb[i] - pa[i];
  return si;
}

/// One-sided traces per sector plus the trace at P in the cell containing −ũ.
template <std::floating_point Scalar>
struct SectorTrace {
  std::array<Primitive<Scalar>, kMaxSectors> star{};
  Primitive<Scalar> zero;
};

template <std::floating_point Scalar>
Primitive<Scalar> leg_operator(const SectorTrace<Scalar>& trace, const SectorPartition<Scalar>& part,
                               const Primitive<Scalar>& tilde, const ConeMetric<Scalar>& cm, Scalar g) {
  if (!(tilde.h > 0)) raise(ErrorKind::NonPositiveDepth, "linearisation depth must be positive");
  const Scalar c = std::sqrt(g * tilde.h);
  const Scalar cg = c / g;
  Scalar h_sum = 0, pi0 = 0, bu = 0, bv = 0, pic = 0, pis = 0;
  ThetaAntiderivatives<Scalar> lo = theta_antiderivatives(cm, part.angles[0]);
  std::array<Scalar, 6> plo = cone_potentials(cm.ginv, part.angles[0]);
  for (int i = 0; i < part.nhat; ++i) {
    const Scalar ta = part.angles[i], tb = part.upper(i);
    const ThetaAntiderivatives<Scalar> hi = theta_antiderivatives(cm, tb);
    const std::array<Scalar, 6> phi = cone_potentials(cm.ginv, tb);
    const ThetaAntiderivatives<Scalar> in = hi - lo;
    const Primitive<Scalar>& s = trace.star[i];
    h_sum += s.h * (tb - ta) - cg * (s.u * in.cos_k + s.v * in.sin_k);
    bu += -s.h * in.gc + cg * (s.u * in.gc_cos_k + s.v * in.gc_sin_k);
    bv += -s.h * in.gs + cg * (s.u * in.gs_cos_k + s.v * in.gs_sin_k);
    pi0 += s.u * (phi[0] - plo[0]) - s.v * (phi[1] - plo[1]);
    pic += s.u * (phi[2] - plo[2]) - s.v * (phi[3] - plo[3]);
    pis += s.u * (phi[4] - plo[4]) - s.v * (phi[5] - plo[5]);
    lo = hi;
    plo = phi;
  }
  const Scalar inv2pi = 1 / kTwoPi<Scalar>;
  const JConstants<Scalar>& j = cm.J;
  const Primitive<Scalar>& z = trace.zero;
  Primitive<Scalar> out;
  out.h = inv2pi * h_sum - cm.det * cg * inv2pi * pi0;
  const Scalar rhs_u = z.u - (inv2pi / cg * bu + (z.u * j.J6 - z.v * j.J4) + cm.det * inv2pi * pic);
  const Scalar rhs_v = z.v - (inv2pi / cg * bv - (z.u * j.J7 - z.v * j.J5) + cm.det * inv2pi * pis);
  const Vec2<Scalar> du = cm.implicit_inverse * Vec2<Scalar>(rhs_u, rhs_v);
  out.u = z.u - du.x();
  out.v = z.v - du.y();
  return out;
}

/// Seam variant: states are (h, u_s, v_s) in m/s; the operator runs in the
/// longitude/latitude chart at latitude lat0.
template <std::floating_point Scalar>
Primitive<Scalar> leg_operator_latlon(const SectorTrace<Scalar>& trace_s, const SectorPartition<Scalar>& part,
                                      const Primitive<Scalar>& tilde_s, Scalar lat0, Scalar g, Scalar radius) {
  if (std::abs(lat0) > kPi<Scalar> / 2 - Scalar(1e-6))
    raise(ErrorKind::PoleSingularity, "seam point too close to a pole");
  const ConeMetric<Scalar> cm = make_cone_metric(latlon_inverse_metric(lat0, radius));
  SectorTrace<Scalar> chart;
  for (int i = 0; i < part.nhat; ++i) chart.star[i] = latlon_to_chart(trace_s.star[i], lat0, radius);
  chart.zero = latlon_to_chart(trace_s.zero, lat0, radius);
  const Primitive<Scalar> out = leg_operator(chart, part, latlon_to_chart(tilde_s, lat0, radius), cm, g);
  return chart_to_latlon(out, lat0, radius);
}

/// Physical normal flux (h v·n, h v (v·n) + ½g(h² − h_ref²) n) of a seam state (h, u_s, v_s).
template <std::floating_point Scalar>
Vec3<Scalar> edge_physical_flux(const Primitive<Scalar>& s, const Vec2<Scalar>& n_s, Scalar g, Scalar href = 0) {
  const Scalar un = s.u * n_s.x() + s.v * n_s.y();
  const Scalar p = Scalar(0.5) * g * (s.h * s.h - href * href);
  return {s.h * un, s.h * s.u * un + p * n_s.x(), s.h * s.v * un + p * n_s.y()};
}

}  // namespace swe
