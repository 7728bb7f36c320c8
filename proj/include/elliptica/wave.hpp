#pragma once

#include "elliptica/abelian.hpp"
#include "elliptica/background.hpp"
#include "elliptica/modulation.hpp"

namespace elliptica::wave {

enum class Route { direct_qmod, dual_F };

struct WaveSample {
  double x = 0.0;
  double t = 0.0;
  double xi = 0.0;
  double d = 0.0;
  double q = 0.0;
  Route route = Route::dual_F;
  /// |Im| of the amplitude times theta ratio; zero on the F route.
  double imag_residue = 0.0;
};

struct PhaseVariable {
  double z = 0.0;
};

/// Everything the wave needs at one (x, t): modulation point, periods, z.
struct WaveState {
  double x = 0.0;
  double t = 0.0;
  double v = 0.0;
  modulation::ModulationPoint point;
  abelian::PeriodData periods;
  double z = 0.0;
};

/// Requires t > 0 and 0 < v < 5/2, v = 1 - x/(4c^2 t).
WaveState wave_state(double x, double t, const Background& bg);
/// Same state parametrized by v directly; x is reconstructed as 4c^2 t (1 - v).
WaveState wave_state_v(double v, double t, const Background& bg);

/// z = (t Bg + Delta) / pi at xi in (-c^2/2, c^2/3).
PhaseVariable z_phase(double t, double xi, const Background& bg);

/// 8 c^3 t v / log(1/v) - 1/2.
double z_leading_edge(double t, double v, const Background& bg);

/// sqrt(c^2 - d^2) Theta(pi i + i pi z | tau) / Theta(i pi z | tau) summed
/// directly at modulus tau. Throws slow_convergence where the direct series
/// cannot be certified, which happens as v -> 0.
WaveSample q_el_direct(const WaveState& s, const Background& bg);
WaveSample q_el_direct(double x, double t, const Background& bg);

/// F(tau*, z) with the same period data.
WaveSample q_el_dual(const WaveState& s, const Background& bg);
WaveSample q_el_dual(double x, double t, const Background& bg);

/// Direct route while tau <= -2 pi, F route closer to the leading edge.
/// At v = 0 exactly the value is the leading-edge limit 0.
WaveSample q_el(double x, double t, const Background& bg);

/// F(tau*, z) = sqrt(c^2 - h^2) exp(tau*/8 + tau* z / 4)
///              Theta(tau*(z+1)/2 | tau*) / Theta(tau* z / 2 | tau*),
/// with z reduced into [0, 2) first and all exponentials combined in log space.
double F_fn(double ts, double z, const Background& bg);
/// F with the branch point of tau* already known.
double F_at(const modulation::BranchPoint& p, double ts, double z, const Background& bg);

/// sqrt(c^2 - h^2(ts)) exp(-ts/8).
double amplitude_factor(double ts, const Background& bg);

}  // namespace elliptica::wave
