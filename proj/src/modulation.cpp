#include "elliptica/modulation.hpp"

#include <boost/math/special_functions/ellint_rd.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "elliptica/quad.hpp"

namespace elliptica::modulation {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kLog8e = std::log(8.0) + 1.0;

void check_d(double d, const Background& bg) {
  if (!(d >= 0.0 && d <= bg.c)) throw Error(Errc::out_of_domain, "branch point d must lie in [0, c]");
}

void check_xi(double xi, const Background& bg) {
  const double c2 = bg.c * bg.c;
  if (!(xi >= -0.5 * c2 && xi <= c2 / 3.0)) throw Error(Errc::out_of_domain, "xi must lie in [-c^2/2, c^2/3]");
}

// R_D(0, k'^2, 1) / R_D(0, 1, k'^2) = k'^2 S / A.
double deficit_ratio(double kp2) {
  if (kp2 == 0.0) return 0.0;
  return boost::math::ellint_rd(0.0, kp2, 1.0) / boost::math::ellint_rd(0.0, 1.0, kp2);
}

}  // namespace

BranchPoint BranchPoint::from_d(double d, const Background& bg) {
  check_d(d, bg);
  return {d, (bg.c - d) / bg.c};
}

BranchPoint BranchPoint::from_eta(double eta, const Background& bg) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(Errc::out_of_domain, "eta must lie in [0, 1]");
  return {bg.c * (1.0 - eta), eta};
}

double mu_squared(double d, const Background& bg) {
  check_d(d, bg);
  const double c = bg.c;
  if (d == 0.0) return 0.0;
  if (d == c) return c * c / 3.0;
  // lambda = sin(theta) turns sqrt(1 - lambda^2) dlambda into cos^2 dtheta.
  const double d2 = d * d;
  auto weight = [&](double t) {
    const double s = std::sin(t);
    const double co = std::cos(t);
    return co * co / std::sqrt((c - d * s) * (c + d * s));
  };
  quad::QuadSpec spec;
  spec.upper = std::numbers::pi / 2;
  spec.rel_tol = 1e-13;
  spec.abs_tol = 0.0;
  const double num = quad::integrate([&](double t) { const double s = std::sin(t); return d2 * s * s * weight(t); }, spec).value;
  const double den = quad::integrate(weight, spec).value;
  return num / den;
}

double mu_squared_moments(double d, const Background& bg) {
  check_d(d, bg);
  const double c = bg.c;
  if (d == 0.0) return 0.0;
  if (d == c) return c * c / 3.0;
  // I3/d^2 and I4/d^4 with y = d lambda; sqrt(1-lambda) goes to the weight.
  auto base = [&](double l) { return (1.0 - l) * std::sqrt(1.0 + l) / std::sqrt((c - d * l) * (c + d * l)); };
  quad::QuadSpec spec;
  spec.right = quad::EndpointOrder::inverse_sqrt;
  spec.rel_tol = 1e-13;
  spec.abs_tol = 0.0;
  const double i3 = quad::integrate(base, spec).value;
  const double i4 = quad::integrate([&](double l) { return (1.0 - l) * (1.0 + l) * base(l); }, spec).value;
  return d * d * (1.0 - i4 / i3);
}

MuSquared mu_squared_at(const BranchPoint& p, const Background& bg) {
  const double third = bg.c * bg.c / 3.0;
  if (p.eta >= 1.0) return {0.0, third};
  const double deficit = third * deficit_ratio(p.kp2());
  return {third - deficit, deficit};
}

double modulation_residual(double mu, double d, const Background& bg) {
  check_d(d, bg);
  const double c = bg.c;
  quad::QuadSpec spec;
  spec.upper = std::numbers::pi / 2;
  spec.abs_tol = 1e-13 * c * c;
  spec.rel_tol = 0.0;
  return quad::integrate(
             [&](double t) {
               const double s = std::sin(t);
               const double co = std::cos(t);
               return (mu * mu - d * d * s * s) * co * co / std::sqrt((c - d * s) * (c + d * s));
             },
             spec)
      .value;
}

double xi_of_d(double d, const Background& bg) {
  const BranchPoint p = BranchPoint::from_d(d, bg);
  const double c = bg.c;
  // mu^2 + d^2/2 - c^2/2 = c^2/3 - deficit - c^2 k'^2 / 2.
  const MuSquared m = mu_squared_at(p, bg);
  return c * c * (1.0 / 3.0 - 0.5 * p.kp2()) - m.deficit;
}

double f_of_xi(double xi, const Background& bg) {
  check_xi(xi, bg);
  return bg.c * (1.0 - eta_of_v(v_of_xi(xi, bg), bg));
}

double eta_of_d(double d, const Background& bg) {
  check_d(d, bg);
  return (bg.c - d) / bg.c;
}

double d_of_eta(double eta, const Background& bg) { return BranchPoint::from_eta(eta, bg).d; }

double v_of_xi(double xi, const Background& bg) {
  check_xi(xi, bg);
  const double c2 = bg.c * bg.c;
  return (c2 - 3.0 * xi) / c2;
}

double xi_of_v(double v, const Background& bg) {
  if (!(v >= 0.0 && v <= 2.5)) throw Error(Errc::out_of_domain, "v must lie in [0, 5/2]");
  return bg.c * bg.c * (1.0 - v) / 3.0;
}

double v_of_eta(double eta, const Background& bg) {
  const BranchPoint p = BranchPoint::from_eta(eta, bg);
  if (eta == 0.0) return 0.0;
  // 1 - 3 mu^2 / c^2 = 3 deficit / c^2 and 3 eta - 3 eta^2 / 2 = 3 k'^2 / 2.
  const double kp2 = p.kp2();
  return deficit_ratio(kp2) + 1.5 * kp2;
}

double v_of_eta_asymptotic(double eta) {
  if (!(eta > 0.0)) throw Error(Errc::out_of_domain, "eta must be positive");
  return eta * (kLog8e - std::log(eta));
}

double eta_of_v(double v, const Background& bg) {
  if (!(v >= 0.0 && v <= 2.5)) throw Error(Errc::out_of_domain, "v must lie in [0, 5/2]");
  if (v == 0.0) return 0.0;
  if (v == 2.5) return 1.0;
  double lo = 1e-300;
  double hi = 1.0;
  const double vlo = v_of_eta(lo, bg);
  if (v <= vlo) return lo * v / vlo;
  for (int i = 0; i < 400; ++i) {
    const double mid = hi > 2.0 * lo ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (v_of_eta(mid, bg) < v)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 2.0 * kEps * hi) break;
  }
  if (!(hi - lo <= 4.0 * kEps * hi)) throw Error(Errc::non_convergent, "eta_of_v bisection did not close");
  return 0.5 * (lo + hi);
}

double eta_of_v_asymptotic(double v) {
  if (!(v > 0.0 && v < 1.0)) throw Error(Errc::out_of_domain, "asymptotic inverse needs 0 < v < 1");
  const double L = -std::log(v);
  return v / L * (1.0 - (kLog8e + std::log(L)) / L);
}

double eta_of_v_lambert(double v) {
  if (!(v > 0.0 && v < 8.0)) throw Error(Errc::out_of_domain, "Lambert route needs 0 < v < 8");
  const double e = std::numbers::e;
  const double z = -v / (8.0 * e);
  const double near_branch = 1.0 + e * z;  // = 1 - v/8
  double w;
  if (near_branch < 0.1) {
    const double p = -std::sqrt(2.0 * near_branch);
    w = -1.0 + p - p * p / 3.0;
  } else {
    const double l1 = std::log(-z);
    w = l1 - std::log(-l1);
  }
  for (int i = 0; i < 100; ++i) {
    const double ew = std::exp(w);
    // Residual relative to z keeps the stopping rule scale free.
    const double step = (w - z / ew) / (w + 1.0);
    w -= step;
    if (std::abs(step) <= 4.0 * kEps * std::abs(w)) break;
  }
  return 8.0 * e * std::exp(w);
}

ModulationPoint point_from_v(double v, const Background& bg) {
  const double eta = eta_of_v(v, bg);
  const BranchPoint p = BranchPoint::from_eta(eta, bg);
  ModulationPoint m;
  m.xi = xi_of_v(v, bg);
  m.d = p.d;
  m.eta = p.eta;
  m.mu = std::sqrt(mu_squared_at(p, bg).value);
  m.v = v;
  return m;
}

ModulationPoint point_from_xi(double xi, const Background& bg) {
  ModulationPoint m = point_from_v(v_of_xi(xi, bg), bg);
  m.xi = xi;
  return m;
}

ModulationPoint point_from_eta(double eta, const Background& bg) {
  const BranchPoint p = BranchPoint::from_eta(eta, bg);
  ModulationPoint m;
  m.v = v_of_eta(eta, bg);
  m.xi = xi_of_v(m.v, bg);
  m.d = p.d;
  m.eta = p.eta;
  m.mu = std::sqrt(mu_squared_at(p, bg).value);
  return m;
}

}  // namespace elliptica::modulation
