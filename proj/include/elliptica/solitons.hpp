#pragma once

#include <span>
#include <vector>

#include "elliptica/background.hpp"
#include "elliptica/wave.hpp"

namespace elliptica::solitons {

struct PhaseRecord {
  int n = 1;
  double alpha_exact = 0.0;
  double alpha_asym = 0.0;
  double alpha_limit = 0.0;
  double khruslov_simple = 0.0;
  double khruslov_det = 0.0;
  double h0 = 1.0;
};

/// alpha_n from tau*(z - 2n + 1)/4 = 2c(x - 4c^2 t) + (2n - 1/2) log t - alpha_n.
double alpha_exact(const wave::WaveState& s, int n, const Background& bg);
double alpha_exact(double x, double t, int n, const Background& bg);

/// -(2n - 1/2) log(log(1/v)/(v t)) - 8 c^3 t v / log(1/v) - (6n - 7/2) log 2.
double alpha_asymptotic_v(double v, double t, int n, const Background& bg);
double alpha_asymptotic(double x, double t, int n, const Background& bg);

/// (2m - 1/2) log((2m - 1/2)/(8 c^3 e)) - (6m - 7/2) log 2.
double alpha_limit(int m, const Background& bg);

/// sum_{n=1}^N 2c / cosh(2c(x - 4c^2 t) + (2n - 1/2) log t - alpha_n(x, t)).
double train_sum(const wave::WaveState& s, int N, const Background& bg);
double train_sum(double x, double t, int N, const Background& bg);

/// x-windows at time t. Part A carries N solitons, part B is the quiet strip
/// next to the edge (its upper end x = 4c^2 t is excluded).
struct TrainWindow {
  int N = 1;
  double epsilon = 0.05;
  double t = 0.0;
  double a_lo = 0.0;
  double a_hi = 0.0;
  double b_lo = 0.0;
  double b_hi = 0.0;

  /// v = 1 - x/(4c^2 t) at a given x offset coefficient k: x = 4c^2 t - k log t / (2c).
  static double v_at(double k, double t, const Background& bg);
  double v_a_lo(const Background& bg) const;
  double v_a_hi(const Background& bg) const;
  double v_b_lo(const Background& bg) const;
};

/// Throws Error{window_empty} when log t <= 0, epsilon is outside (0, 1/4),
/// or the window leaves the modulated zone.
TrainWindow train_window(int N, double epsilon, double t, const Background& bg);

/// Smallest t (found by scanning then bisecting in log t) from which z maps
/// the part-A window into [0, 2N] and the part-B window below 1/2. Returns
/// +inf if no such t exists below exp(600).
double interval_threshold(double epsilon, int N, const Background& bg);

struct KhruslovPhase {
  double simple = 0.0;
  double determinant = 0.0;
  /// True when all Hankel determinants were evaluated in exact integer arithmetic.
  bool exact = false;
};

/// Both published forms of the Khruslov phase. Throws Error{invalid_h0} for h0 = 0.
KhruslovPhase khruslov_phase(int n, const Background& bg, double h0);

/// log det[Gamma(i + j + b)]_{i,j < k}; k = 0 gives 0. Exact big-integer
/// elimination for k <= 6 and b in {1, 3/2}, pivoted LU otherwise.
double log_hankel_gamma(int k, double b, bool* exact = nullptr);

struct CurveRow {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  double q_el = 0.0;
  double alpha_exact = 0.0;
  double error = 0.0;     // |q_el - q_el_limit|
  double envelope = 0.0;  // log^2(log t) / log t
  double ratio = 0.0;
};

struct MismatchReport {
  int m = 1;
  double h0 = 1.0;
  double c = 1.0;
  double khruslov_simple = 0.0;
  double khruslov_det = 0.0;
  double alpha_limit = 0.0;
  double mismatch = 0.0;  // khruslov_simple - alpha_limit
  double q_el_limit = 0.0;
  double khruslov_prediction = 0.0;
  std::vector<CurveRow> rows;
};

/// Evaluates q_el along x = 4c^2 t - (2m - 1/2) log t / (2c) + khruslov_m / (2c).
MismatchReport phase_mismatch_report(int m, const Background& bg, double h0, std::span<const double> t_grid);

}  // namespace elliptica::solitons
