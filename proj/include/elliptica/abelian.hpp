#pragma once

#include <functional>

#include "elliptica/background.hpp"
#include "elliptica/modulation.hpp"

namespace elliptica::abelian {

enum class ScatteringKind { closed_form_step, user_supplied };

/// y -> log(a_+(iy) a_-(iy)) on (d, c). The callable takes the gap c - y as a
/// second argument so log-singular forms can keep precision next to y = c.
struct ScatteringLog {
  ScatteringKind kind = ScatteringKind::closed_form_step;
  std::function<double(double y, double gap)> log_a;

  /// log(c / (2 sqrt(c^2 - y^2))) for the pure step.
  static ScatteringLog step(const Background& bg);
  static ScatteringLog user(std::function<double(double y)> f);

  double operator()(double y, double gap) const { return log_a(y, gap); }
};

/// log c - log 2 - (1/2) log(c^2 - y^2) for 0 <= y < c.
double step_scattering_log(double y, const Background& bg);

struct PeriodData {
  double d = 0.0;
  double eta = 0.0;
  double I0 = 0.0;
  double I1 = 0.0;
  double I2 = 0.0;
  double I3 = 0.0;
  double I4 = 0.0;
  double mu2 = 0.0;
  double Bg = 0.0;
  double tau = 0.0;
  double tau_star = 0.0;
  double delta = 0.0;
};

/// Full period bundle for 0 < d < c. I0 and I1 come from the AGM, the rest
/// from quadrature after y = d + (c - d) s, s = sin^2 t (or y = d sin t on
/// [0, d]). mu^2 is taken from the modulation module.
PeriodData periods(const modulation::BranchPoint& p, const Background& bg, const ScatteringLog& s);
PeriodData periods(const modulation::BranchPoint& p, const Background& bg);
PeriodData periods(double d, const Background& bg);

/// tau = -pi I0/I1 and tau* = -4 pi I1/I0 from the AGM only.
double tau_at(const modulation::BranchPoint& p, const Background& bg);
double tau_star_at(const modulation::BranchPoint& p, const Background& bg);

/// Inverse of tau*(d) by bisection (log-spaced in d toward 0 and in eta
/// toward c). tau* below about -2770 returns eta = 0, and tau* above about
/// -0.0286 returns d = 0: the true branch point is not representable there.
modulation::BranchPoint branch_of_tau_star(double ts, const Background& bg);
double h_of_tau_star(double ts, const Background& bg);

/// Direct quadrature of the defining y-integrals, kept as oracles for the
/// AGM values and the folded forms.
double I0_quadrature(double d, const Background& bg);
double I1_quadrature(double d, const Background& bg);
double I2_quadrature(double d, const Background& bg);

}  // namespace elliptica::abelian
