#pragma once

#include <complex>

namespace elliptica::theta {

enum class Representation { direct, poisson_dual };

/// Theta(z | tau) = sum_m exp(tau m^2 / 2 + z m), tau < 0.
struct ThetaArgs {
  std::complex<double> z;
  double tau;
};

/// The value is mantissa * exp(log_scale). Both bounds are absolute errors in
/// mantissa units: tail_bound covers the discarded terms, rounding_bound the
/// floating-point error of the partial sum. log_scale itself carries the usual
/// eps |log_scale| rounding, which is not part of either bound.
struct ThetaValue {
  std::complex<double> mantissa{1.0, 0.0};
  double log_scale = 0.0;
  int terms_used = 0;
  double tail_bound = 0.0;
  double rounding_bound = 0.0;
  Representation representation = Representation::direct;

  /// Throws Error{overflow} when the magnitude leaves the double range.
  std::complex<double> value() const;
  double log_abs() const;
};

/// Symmetric truncation m in [-M, M] with M the smallest integer satisfying
/// |tau| M^2 / 2 - |Re z| M >= 40, taken after Im z is reduced mod 2 pi and
/// Re z is moved into [tau/2, -tau/2] with the quasi-periodicity.
/// Throws Error{slow_convergence} when M exceeds the term budget or when
/// cancellation leaves the sum with relative rounding error above 1e-12.
ThetaValue theta_direct(const ThetaArgs& args);

/// Theta(2 pi i z / tau | 4 pi^2 / tau) sqrt(2 pi / -tau) exp(-z^2 / (2 tau)),
/// with the prefactor folded into log_scale and the mantissa phase.
ThetaValue theta_dual(const ThetaArgs& args);

/// Direct for tau <= -2 pi, dual above. If the chosen series reports
/// slow_convergence the other one is tried before giving up.
ThetaValue theta_auto(const ThetaArgs& args);

/// num / den with the scales combined before a single exponential.
std::complex<double> ratio(const ThetaValue& num, const ThetaValue& den);

}  // namespace elliptica::theta
