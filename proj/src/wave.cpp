#include "elliptica/wave.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "elliptica/theta.hpp"

namespace elliptica::wave {
namespace {

using modulation::BranchPoint;

constexpr double kLogMax = 709.0;

// log k'^2; below the representable eta the leading tau* asymptotic stands in.
double log_kp2(const BranchPoint& p, double ts) {
  if (p.eta > 0.0) return std::log(p.eta) + std::log(2.0 - p.eta);
  return std::log(16.0) + 0.25 * ts;
}

double reduce_mod2(double z) { return z - 2.0 * std::floor(0.5 * z); }

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(Errc::out_of_domain, "t must be positive and finite");
}

}  // namespace

WaveState wave_state_v(double v, double t, const Background& bg) {
  check_t(t);
  if (!(v > 0.0 && v < 2.5)) throw Error(Errc::out_of_domain, "v = 1 - x/(4c^2 t) must lie in (0, 5/2)");
  const double c = bg.c;
  WaveState s;
  s.t = t;
  s.v = v;
  s.x = 4.0 * c * c * t * (1.0 - v);
  s.point = modulation::point_from_v(v, bg);
  s.periods = abelian::periods(s.point.branch(), bg);
  s.z = (t * s.periods.Bg + s.periods.delta) / std::numbers::pi;
  return s;
}

WaveState wave_state(double x, double t, const Background& bg) {
  check_t(t);
  const double edge = 4.0 * bg.c * bg.c * t;
  WaveState s = wave_state_v((edge - x) / edge, t, bg);
  s.x = x;
  return s;
}

PhaseVariable z_phase(double t, double xi, const Background& bg) {
  const double c2 = bg.c * bg.c;
  if (!(xi > -0.5 * c2 && xi < c2 / 3.0)) throw Error(Errc::out_of_domain, "xi must lie in (-c^2/2, c^2/3)");
  return {wave_state_v(modulation::v_of_xi(xi, bg), t, bg).z};
}

double z_leading_edge(double t, double v, const Background& bg) {
  if (!(v > 0.0 && v < 1.0)) throw Error(Errc::out_of_domain, "leading-edge form needs 0 < v < 1");
  const double c = bg.c;
  return 8.0 * c * c * c * t * v / -std::log(v) - 0.5;
}

WaveSample q_el_direct(const WaveState& s, const Background& bg) {
  const double pi = std::numbers::pi;
  const double phi = pi * reduce_mod2(s.z);
  const double tau = s.periods.tau;
  const theta::ThetaValue num = theta::theta_direct({{0.0, pi + phi}, tau});
  const theta::ThetaValue den = theta::theta_direct({{0.0, phi}, tau});
  const std::complex<double> r = theta::ratio(num, den);
  const double amp = bg.c * std::sqrt(s.point.branch().kp2());

  WaveSample out;
  out.x = s.x;
  out.t = s.t;
  out.xi = s.point.xi;
  out.d = s.point.d;
  out.q = amp * r.real();
  out.imag_residue = amp * std::abs(r.imag());
  out.route = Route::direct_qmod;
  return out;
}

WaveSample q_el_direct(double x, double t, const Background& bg) { return q_el_direct(wave_state(x, t, bg), bg); }

WaveSample q_el_dual(const WaveState& s, const Background& bg) {
  WaveSample out;
  out.x = s.x;
  out.t = s.t;
  out.xi = s.point.xi;
  out.d = s.point.d;
  out.q = F_at(s.point.branch(), s.periods.tau_star, s.z, bg);
  out.route = Route::dual_F;
  return out;
}

WaveSample q_el_dual(double x, double t, const Background& bg) { return q_el_dual(wave_state(x, t, bg), bg); }

WaveSample q_el(double x, double t, const Background& bg) {
  check_t(t);
  const double edge = 4.0 * bg.c * bg.c * t;
  if (x == edge) {
    WaveSample out;
    out.x = x;
    out.t = t;
    out.xi = x / (12.0 * t);
    out.d = bg.c;
    return out;
  }
  const WaveState s = wave_state(x, t, bg);
  if (s.periods.tau <= -2.0 * std::numbers::pi) {
    try {
      return q_el_direct(s, bg);
    } catch (const Error& e) {
      if (e.code() != Errc::slow_convergence) throw;
    }
  }
  return q_el_dual(s, bg);
}

double F_at(const BranchPoint& p, double ts, double z, const Background& bg) {
  if (!(ts < 0.0) || !std::isfinite(ts)) throw Error(Errc::out_of_domain, "F needs finite tau* < 0");
  if (!std::isfinite(z)) throw Error(Errc::out_of_domain, "F needs finite z");
  const double zr = reduce_mod2(z);
  const theta::ThetaValue num = theta::theta_auto({0.5 * ts * (zr + 1.0), ts});
  const theta::ThetaValue den = theta::theta_auto({0.5 * ts * zr, ts});
  const std::complex<double> r = num.mantissa / den.mantissa;
  const double log_total =
      std::log(bg.c) + 0.5 * log_kp2(p, ts) + 0.125 * ts + 0.25 * ts * zr + num.log_scale - den.log_scale;
  if (r.real() != 0.0 && log_total + std::log(std::abs(r.real())) > kLogMax)
    throw Error(Errc::overflow, "F exceeds the double range");
  return r.real() * std::exp(log_total);
}

double F_fn(double ts, double z, const Background& bg) {
  return F_at(abelian::branch_of_tau_star(ts, bg), ts, z, bg);
}

double amplitude_factor(double ts, const Background& bg) {
  const BranchPoint p = abelian::branch_of_tau_star(ts, bg);
  return std::exp(std::log(bg.c) + 0.5 * log_kp2(p, ts) - 0.125 * ts);
}

}  // namespace elliptica::wave
