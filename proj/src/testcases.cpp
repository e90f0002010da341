#include "swe/testcases.hpp"

#include "swe/quadrature.hpp"

#include <cmath>

namespace swe {

namespace {

double sech2(double x) {
  const double c = std::cosh(x);
  return 1 / (c * c);
}

// q(ρ) = tanh ρ / (ρ cosh²ρ) and q′(ρ), with series near ρ = 0.
std::pair<double, double> deform_profile(double rho) {
  if (std::abs(rho) < 1e-3) {
    const double r2 = rho * rho;
    return {1 - 4 * r2 / 3 + 17 * r2 * r2 / 15, rho * (-8.0 / 3 + 68 * r2 / 15)};
  }
  const double t = std::tanh(rho), s2 = sech2(rho);
  return {t * s2 / rho, (s2 * s2 - 2 * t * t * s2) / rho - t * s2 / (rho * rho)};
}

}  // namespace

CaseId parse_case(const std::string& name) {
  if (name == "w2") return CaseId::W2;
  if (name == "lauter") return CaseId::Lauter;
  if (name == "w5") return CaseId::W5;
  if (name == "deform") return CaseId::Deform;
  if (name == "rh4") return CaseId::RH4;
  if (name == "crosspolar") return CaseId::CrossPolar;
  if (name == "galewsky") return CaseId::Galewsky;
  raise(ErrorKind::Usage,
        "unknown case '" + name + "' (expected w2, lauter, w5, deform, rh4, crosspolar or galewsky)");
}

const char* to_string(CaseId id) noexcept {
  switch (id) {
    case CaseId::W2: return "w2";
    case CaseId::Lauter: return "lauter";
    case CaseId::W5: return "w5";
    case CaseId::Deform: return "deform";
    case CaseId::RH4: return "rh4";
    case CaseId::CrossPolar: return "crosspolar";
    case CaseId::Galewsky: return "galewsky";
  }
  return "unknown";
}

TestCase::TestCase(CaseId id, const PhysicalConstants<double>& constants, const CaseParameters& params)
    : id_(id), constants_(constants), params_(params) {
  // The tilted steady flow rotates with a tilted axis; the other cases keep the grid pole.
  if (id_ == CaseId::W2) constants_.alpha = params_.alpha;
}

TestCase make_case(CaseId id) {
  PhysicalConstants<double> pc;
  CaseParameters p;
  const double g = pc.g;
  switch (id) {
    case CaseId::W2:
      p.h0 = 2.94e4 / g;
      p.u0 = kTwoPi<double> * pc.radius / (12 * kSecondsPerDay);
      break;
    case CaseId::Lauter:
      p.u0 = kTwoPi<double> * pc.radius / (12 * kSecondsPerDay);
      p.alpha = kPi<double> / 4;
      break;
    case CaseId::W5:
      p.h0 = 5960.0;
      p.u0 = 20.0;
      break;
    case CaseId::Deform:
      p.u0 = kPi<double> / (6 * kSecondsPerDay);
      break;
    case CaseId::RH4:
      p.h0 = 8000.0;
      break;
    case CaseId::CrossPolar:
      p.h0 = 5.768e4 / g;
      p.u0 = 20.0;
      break;
    case CaseId::Galewsky:
      p.h0 = 10000.0;
      p.u0 = 80.0;
      break;
  }
  return TestCase(id, pc, p);
}

bool TestCase::has_exact() const { return id_ == CaseId::W2 || id_ == CaseId::Lauter || id_ == CaseId::Deform; }

bool TestCase::has_topography() const { return id_ == CaseId::Lauter || id_ == CaseId::W5; }

SphericalState<double> TestCase::w2_like(const SphericalPoint<double>& s, double h0, double u0, double alpha) const {
  const double g = constants_.g, r = constants_.radius, om = constants_.omega;
  const double cl = std::cos(s.lon), sl = std::sin(s.lon), ce = std::cos(s.lat), se = std::sin(s.lat);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double w = -cl * ce * sa + se * ca;
  return {h0 - (r * om * u0 + u0 * u0 / 2) * w * w / g, u0 * (ce * ca + cl * se * sa), -u0 * sl * sa};
}

SphericalState<double> TestCase::lauter(const SphericalPoint<double>& s, double t) const {
  const double g = constants_.g, r = constants_.radius, om = constants_.omega;
  const double u0 = params_.u0, ca = std::cos(params_.alpha), sa = std::sin(params_.alpha);
  const double cl = std::cos(s.lon), sl = std::sin(s.lon), ce = std::cos(s.lat), se = std::sin(s.lat);
  const double ct = std::cos(om * t), st = std::sin(om * t);
  const double phase = -cl * ce * sa * ct + sl * ce * sa * st + se * ca;
  const double total = u0 * phase + r * om * se;
  const double rot = r * om * se;
  const double h = -total * total / (2 * g) + rot * rot / (2 * g) + params_.k1 / g - topography(s);
  return {h, u0 * (sa * se * (cl * ct - sl * st) + ca * ce), -u0 * sa * (sl * ct + cl * st)};
}

double TestCase::deform_omega(double lat) const {
  const double rho = params_.rho0 * std::cos(lat);
  if (rho == 0) return 0;
  return 1.5 * std::sqrt(3.0) * params_.u0 * deform_profile(rho).first;
}

SphericalState<double> TestCase::deform(const SphericalPoint<double>& s, double t) const {
  const double r = constants_.radius;
  const double rho = params_.rho0 * std::cos(s.lat);
  const double om = deform_omega(s.lat);
  return {r - r * std::tanh(rho / params_.gamma * std::sin(s.lon - om * t)), r * om * std::cos(s.lat), 0};
}

double TestCase::galewsky_jet(double lat) const {
  if (!(lat > params_.lat0 && lat < params_.lat1)) return 0;
  const double en = std::exp(-4 / ((params_.lat1 - params_.lat0) * (params_.lat1 - params_.lat0)));
  return params_.u0 / en * std::exp(1 / ((lat - params_.lat0) * (lat - params_.lat1)));
}

double TestCase::galewsky_balance(double lat) const {
  const double upper = std::min(lat, params_.lat1);
  if (upper <= params_.lat0) return 0;
  {
    const std::lock_guard<std::mutex> lock(cache_->guard);
    const auto it = cache_->values.find(upper);
    if (it != cache_->values.end()) return it->second;
  }
  const double r = constants_.radius, g = constants_.g, om = constants_.omega;
  auto integrand = [&](double e) {
    const double u = galewsky_jet(e);
    return r * u * (2 * om * std::sin(e) + std::tan(e) * u / r) / g;
  };
  const double value = integrate_adaptive(integrand, params_.lat0, upper, 1e-10 * params_.h0);
  const std::lock_guard<std::mutex> lock(cache_->guard);
  cache_->values.emplace(upper, value);
  return value;
}

SphericalState<double> TestCase::initial(const SphericalPoint<double>& s) const {
  const double g = constants_.g, r = constants_.radius, om = constants_.omega;
  switch (id_) {
    case CaseId::W2: return w2_like(s, params_.h0, params_.u0, params_.alpha);
    case CaseId::Lauter: return lauter(s, 0);
    case CaseId::W5: {
      SphericalState<double> w = w2_like(s, params_.h0, params_.u0, 0);
      w.h -= topography(s);
      return w;
    }
    case CaseId::Deform: return deform(s, 0);
    case CaseId::RH4: {
      const double k = params_.rh_k;
      const int n = params_.rh_r;
      const double rr = n;
      const double ce = std::cos(s.lat), se = std::sin(s.lat), c2 = ce * ce;
      const double cr = std::pow(ce, n), c2r = cr * cr;
      const double a = k / 2 * (2 * om + k) * c2 +
                       k * k / 4 * c2r * ((rr + 1) * c2 + (2 * rr * rr - rr - 2) - 2 * rr * rr / c2);
      const double b = 2 * (om + k) * k / ((rr + 1) * (rr + 2)) * cr * ((rr * rr + 2 * rr + 2) - (rr + 1) * (rr + 1) * c2);
      const double c = k * k / 4 * c2r * ((rr + 1) * c2 - (rr + 2));
      const double h = params_.h0 + r * r / g * (a + b * std::cos(rr * s.lon) + c * std::cos(2 * rr * s.lon));
      const double crm1 = std::pow(ce, n - 1);
      const double us = r * k * ce + r * k * crm1 * (rr * se * se - c2) * std::cos(rr * s.lon);
      const double vs = -r * k * rr * crm1 * se * std::sin(rr * s.lon);
      return {h, us, vs};
    }
    case CaseId::CrossPolar: {
      const double ce = std::cos(s.lat), se = std::sin(s.lat), u0 = params_.u0;
      const double h = params_.h0 - 2 / g * r * om * u0 * se * se * se * ce * std::sin(s.lon);
      return {h, -u0 * std::sin(s.lon) * se * (4 * ce * ce - 1), u0 * se * se * std::cos(s.lon)};
    }
    case CaseId::Galewsky: {
      double h = params_.h0 - galewsky_balance(s.lat);
      if (params_.perturb) {
        const double x = s.lon / params_.g_alpha, y = (params_.lat2 - s.lat) / params_.g_beta;
        h += params_.h_hat * std::cos(s.lat) * std::exp(-x * x - y * y);
      }
      return {h, galewsky_jet(s.lat), 0};
    }
  }
  raise(ErrorKind::Usage, "unknown case");
}

SphericalState<double> TestCase::exact(const SphericalPoint<double>& s, double t) const {
  switch (id_) {
    case CaseId::W2: return initial(s);
    case CaseId::Lauter: return lauter(s, t);
    case CaseId::Deform: {
      SphericalState<double> w = deform(s, t);
      const SphericalState<double> w0 = deform(s, 0);
      w.u = w0.u;
      w.v = w0.v;
      return w;
    }
    default: raise(ErrorKind::NoExactSolution, std::string("case '") + to_string(id_) + "' has no exact solution");
  }
}

double TestCase::topography(const SphericalPoint<double>& s) const {
  if (id_ == CaseId::Lauter) {
    const double rot = constants_.radius * constants_.omega * std::sin(s.lat);
    return rot * rot / (2 * constants_.g) + params_.k2 / constants_.g;
  }
  if (id_ == CaseId::W5) {
    const double dl = s.lon - params_.lon_c, de = s.lat - params_.lat_c;
    const double r = std::min(params_.r0, std::sqrt(dl * dl + de * de));
    return params_.b0 * (1 - r / params_.r0);
  }
  return 0;
}

Vec2<double> TestCase::topography_gradient(const SphericalPoint<double>& s) const {
  const double radius = constants_.radius;
  if (id_ == CaseId::Lauter) {
    const double om = constants_.omega;
    return {0, radius * om * om * std::sin(s.lat) * std::cos(s.lat) / constants_.g};
  }
  if (id_ == CaseId::W5) {
    const double dl = s.lon - params_.lon_c, de = s.lat - params_.lat_c;
    const double dist = std::sqrt(dl * dl + de * de);
    if (dist >= params_.r0 || dist == 0) return Vec2<double>::Zero();
    const double slope = -params_.b0 / (params_.r0 * dist);
    return {slope * dl / (radius * std::cos(s.lat)), slope * de / radius};
  }
  return Vec2<double>::Zero();
}

Vec2<double> TestCase::forcing(const SphericalPoint<double>& s, double t) const {
  if (id_ != CaseId::Deform) return Vec2<double>::Zero();
  const double g = constants_.g, r = constants_.radius;
  const double ce = std::cos(s.lat), se = std::sin(s.lat);
  const double rho = params_.rho0 * ce, drho = -params_.rho0 * se;
  const double om = deform_omega(s.lat);
  const double dom = rho == 0 ? 0 : 1.5 * std::sqrt(3.0) * params_.u0 * deform_profile(rho).second * drho;
  const double phase = s.lon - om * t;
  const double x = rho / params_.gamma * std::sin(phase);
  const double s2 = sech2(x);
  // (1/cos η)·∂ξ tanh X, with ρ/cos η = ρ₀ taken exactly.
  const double dxi_over_cos = s2 * params_.rho0 / params_.gamma * std::cos(phase);
  const double deta = s2 * (drho / params_.gamma * std::sin(phase) - rho / params_.gamma * std::cos(phase) * t * dom);
  const double f = coriolis(s, constants_);
  return {-g * dxi_over_cos, -g * deta + (f + om * se) * r * om * ce};
}

Problem<double> TestCase::problem(double href) const {
  Problem<double> p;
  p.constants = constants_;
  p.href = href;
  if (has_topography()) {
    p.topography = [self = *this](const SphericalPoint<double>& s) { return self.topography(s); };
  }
  if (has_forcing()) p.forcing = [self = *this](const SphericalPoint<double>& s, double t) { return self.forcing(s, t); };
  return p;
}

}  // namespace swe
