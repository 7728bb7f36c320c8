#pragma once

#include "elliptica/background.hpp"

namespace elliptica::modulation {

/// Branch point carried as both d and eta = 1 - d/c, so neither has to be
/// recovered from the other by a cancelling subtraction.
struct BranchPoint {
  double d = 0.0;
  double eta = 1.0;

  static BranchPoint from_d(double d, const Background& bg);
  static BranchPoint from_eta(double eta, const Background& bg);

  double k(const Background& bg) const { return d / bg.c; }
  /// k'^2 = 1 - (d/c)^2 = eta (2 - eta).
  double kp2() const { return eta * (2.0 - eta); }
};

struct ModulationPoint {
  double xi = 0.0;
  double d = 0.0;
  double mu = 0.0;
  double eta = 1.0;
  double v = 0.0;

  BranchPoint branch() const { return {d, eta}; }
};

/// mu^2(d) as the ratio of the two lambda-integrals of the defining relation.
/// Endpoints are exact: mu(0) = 0, mu(c) = c / sqrt(3).
double mu_squared(double d, const Background& bg);

/// mu^2 = d^2 - I4/I3, evaluated with an independent substitution.
double mu_squared_moments(double d, const Background& bg);

struct MuSquared {
  double value;
  /// c^2/3 - mu^2, accurate relative to itself even as d -> c.
  double deficit;
};

/// Production mu^2. The deficit c^2/3 - mu^2 is written as
/// (c^2 k'^2 / 3) S / A with S = int sin^2/Delta, A = int cos^2/Delta over
/// [0, pi/2], Delta = sqrt(1 - k^2 sin^2); both integrands are positive.
MuSquared mu_squared_at(const BranchPoint& p, const Background& bg);

/// Value of the defining functional int_0^1 (mu^2 - l^2 d^2) sqrt((1-l^2)/(c^2-l^2 d^2)) dl.
double modulation_residual(double mu, double d, const Background& bg);

/// xi(d) = mu^2 + d^2/2 - c^2/2.
double xi_of_d(double d, const Background& bg);

/// Inverse of xi_of_d by bisection; |xi_of_d(result) - xi| <= 1e-12 c^2.
double f_of_xi(double xi, const Background& bg);

double eta_of_d(double d, const Background& bg);
double d_of_eta(double eta, const Background& bg);
double v_of_xi(double xi, const Background& bg);
double xi_of_v(double v, const Background& bg);

/// v(eta) = 1 - 3 xi(d(eta)) / c^2 over [0, 1]; v(1) = 5/2.
double v_of_eta(double eta, const Background& bg);

/// Leading-order form eta log(8e/eta).
double v_of_eta_asymptotic(double eta);

/// Inverse of v_of_eta by bisection on eta, for 0 < v <= 5/2.
double eta_of_v(double v, const Background& bg);

/// (v/L)(1 - (log 8e + log L)/L), L = log(1/v). Meaningful for small v only.
double eta_of_v_asymptotic(double v);

/// Solves w e^w = -v/(8e), w = log(eta/(8e)), on the lower branch by Newton.
/// This inverts v = eta log(8e/eta) exactly; requires 0 < v < 8.
double eta_of_v_lambert(double v);

ModulationPoint point_from_v(double v, const Background& bg);
ModulationPoint point_from_xi(double xi, const Background& bg);
ModulationPoint point_from_eta(double eta, const Background& bg);

}  // namespace elliptica::modulation
