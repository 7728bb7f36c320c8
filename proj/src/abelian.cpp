#include "elliptica/abelian.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "elliptica/quad.hpp"

namespace elliptica::abelian {
namespace {

using modulation::BranchPoint;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTol = 1e-13;

void check_open(const BranchPoint& p, const Background& bg) {
  // d may round to c when eta is tiny, and eta to 1 when d is tiny; the
  // other coordinate carries the distance.
  if (!(p.d > 0.0 && p.d <= bg.c && p.eta > 0.0 && p.eta <= 1.0))
    throw Error(Errc::out_of_domain, "periods need 0 < d < c");
}

double agm_I0(const BranchPoint& p, const Background& bg) {
  return quad::complete_elliptic_K_from_complement(p.k(bg)) / bg.c;
}

double agm_I1(const BranchPoint& p, const Background& bg) {
  return quad::complete_elliptic_K_from_complement(std::sqrt(p.kp2())) / bg.c;
}

double step_log(double y, double gap, double c) {
  return std::log(c) - std::numbers::ln2 - 0.5 * std::log(gap) - 0.5 * std::log(c + y);
}

}  // namespace

ScatteringLog ScatteringLog::step(const Background& bg) {
  const double c = bg.c;
  return {ScatteringKind::closed_form_step, [c](double y, double gap) { return step_log(y, gap, c); }};
}

ScatteringLog ScatteringLog::user(std::function<double(double y)> f) {
  if (!f) throw Error(Errc::invalid_spec, "scattering callable is empty");
  return {ScatteringKind::user_supplied, [f = std::move(f)](double y, double) { return f(y); }};
}

double step_scattering_log(double y, const Background& bg) {
  if (!(y >= 0.0 && y < bg.c)) throw Error(Errc::out_of_domain, "step scattering log needs 0 <= y < c");
  return step_log(y, bg.c - y, bg.c);
}

double tau_at(const BranchPoint& p, const Background& bg) {
  check_open(p, bg);
  return -std::numbers::pi * agm_I0(p, bg) / agm_I1(p, bg);
}

double tau_star_at(const BranchPoint& p, const Background& bg) {
  check_open(p, bg);
  return -4.0 * std::numbers::pi * agm_I1(p, bg) / agm_I0(p, bg);
}

PeriodData periods(const BranchPoint& p, const Background& bg, const ScatteringLog& s) {
  check_open(p, bg);
  if (!s.log_a) throw Error(Errc::invalid_spec, "scattering callable is empty");
  const double c = bg.c;
  const double d = p.d;
  const double w = c * p.eta;  // c - d

  PeriodData out;
  out.d = d;
  out.eta = p.eta;
  out.I0 = agm_I0(p, bg);
  out.I1 = agm_I1(p, bg);
  out.mu2 = modulation::mu_squared_at(p, bg).value;

  // y = d + (c - d) s; c - y = (c - d)(1 - s).
  out.I2 = quad::integrate_arcsine(
               [&](double sv, double oms) {
                 const double y = d + w * sv;
                 return s(y, w * oms) / std::sqrt((c + y) * (y + d));
               },
               kTol / c, kTol)
               .value;
  const double mu2 = out.mu2;
  out.Bg = 24.0 * w *
           quad::integrate_arcsine(
               [&](double sv, double) {
                 const double y = d + w * sv;
                 return sv * (y * y - mu2) * std::sqrt(y + d) / std::sqrt(c + y);
               },
               0.0, kTol)
               .value;

  // y = d sin t on [0, d]; c^2 - y^2 = c^2 (cos^2 + k'^2 sin^2).
  const double kp2 = p.kp2();
  quad::QuadSpec spec;
  spec.upper = std::numbers::pi / 2;
  spec.abs_tol = 0.0;
  spec.rel_tol = kTol;
  auto cos2_over = [&](double t) {
    const double sn = std::sin(t);
    const double cs = std::cos(t);
    return cs * cs / (c * std::sqrt(cs * cs + kp2 * sn * sn));
  };
  out.I3 = d * d * quad::integrate(cos2_over, spec).value;
  out.I4 = d * d * d * d *
           quad::integrate([&](double t) { const double cs = std::cos(t); return cs * cs * cos2_over(t); }, spec).value;

  out.tau = -std::numbers::pi * out.I0 / out.I1;
  out.tau_star = -4.0 * std::numbers::pi * out.I1 / out.I0;
  out.delta = -out.I2 / out.I1;
  return out;
}

PeriodData periods(const BranchPoint& p, const Background& bg) { return periods(p, bg, ScatteringLog::step(bg)); }

PeriodData periods(double d, const Background& bg) { return periods(BranchPoint::from_d(d, bg), bg); }

BranchPoint branch_of_tau_star(double ts, const Background& bg) {
  if (!(ts < 0.0) || !std::isfinite(ts)) throw Error(Errc::out_of_domain, "tau* must be negative and finite");
  const double c = bg.c;
  const BranchPoint half = BranchPoint::from_eta(0.5, bg);
  const bool near_edge = ts <= tau_star_at(half, bg);

  // Geometric bisection on eta in (0, 1/2] or on d/c in (0, 1/2]; tau* decreases in d.
  auto make = [&](double u) { return near_edge ? BranchPoint::from_eta(u, bg) : BranchPoint{c * u, 1.0 - u}; };
  double lo = 1e-300;
  double hi = 0.5;
  const double t_lo = tau_star_at(make(lo), bg);
  if (near_edge ? ts <= t_lo : ts >= t_lo) return near_edge ? BranchPoint{c, 0.0} : BranchPoint{0.0, 1.0};

  for (int i = 0; i < 400; ++i) {
    const double mid = hi > 2.0 * lo ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double t_mid = tau_star_at(make(mid), bg);
    // Moving toward the edge (larger d) lowers tau*.
    const bool go_up = near_edge ? (t_mid < ts) : (t_mid > ts);
    if (go_up)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 2.0 * kEps * hi) break;
  }
  if (!(hi - lo <= 4.0 * kEps * hi)) throw Error(Errc::non_convergent, "tau* inversion did not close");
  return make(0.5 * (lo + hi));
}

double h_of_tau_star(double ts, const Background& bg) { return branch_of_tau_star(ts, bg).d; }

double I0_quadrature(double d, const Background& bg) {
  const double c = bg.c;
  if (!(d > 0.0 && d < c)) throw Error(Errc::out_of_domain, "I0 needs 0 < d < c");
  quad::QuadSpec spec;
  spec.lower = d;
  spec.upper = c;
  spec.left = spec.right = quad::EndpointOrder::inverse_sqrt;
  spec.abs_tol = 0.0;
  spec.rel_tol = kTol;
  return quad::integrate([&](double y) { return 1.0 / std::sqrt((c + y) * (y + d)); }, spec).value;
}

double I1_quadrature(double d, const Background& bg) {
  const double c = bg.c;
  if (!(d > 0.0 && d < c)) throw Error(Errc::out_of_domain, "I1 needs 0 < d < c");
  quad::QuadSpec spec;
  spec.upper = d;
  spec.right = quad::EndpointOrder::inverse_sqrt;
  spec.abs_tol = 0.0;
  spec.rel_tol = kTol;
  return quad::integrate([&](double y) { return 1.0 / std::sqrt((c - y) * (c + y) * (d + y)); }, spec).value;
}

double I2_quadrature(double d, const Background& bg) {
  const double c = bg.c;
  if (!(d > 0.0 && d < c)) throw Error(Errc::out_of_domain, "I2 needs 0 < d < c");
  const double w = c - d;
  // y = c - (c - d) u keeps the log-singular end at u = 0 exactly representable.
  quad::QuadSpec spec;
  spec.left = spec.right = quad::EndpointOrder::inverse_sqrt;
  spec.abs_tol = kTol / c;
  spec.rel_tol = kTol;
  return quad::integrate(
             [&](double u) {
               const double y = c - w * u;
               return step_log(y, w * u, c) / std::sqrt((c + y) * (y + d));
             },
             spec)
      .value;
}

}  // namespace elliptica::abelian
