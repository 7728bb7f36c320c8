#pragma once

#include <cstddef>
#include <functional>

namespace elliptica::quad {

/// Exponent of the endpoint weight: (x - a)^0 or (x - a)^{-1/2}.
enum class EndpointOrder { regular, inverse_sqrt };

/// Maps a numeric exponent (0 or -1/2) onto EndpointOrder; anything else is
/// an invalid_spec error.
EndpointOrder endpoint_order(double exponent);

struct QuadSpec {
  double lower = 0.0;
  double upper = 1.0;
  EndpointOrder left = EndpointOrder::regular;
  EndpointOrder right = EndpointOrder::regular;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  std::size_t max_evaluations = 2'000'000;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Integrates f(x) (x-a)^{left} (b-x)^{right} over [a, b].
///
/// The inverse square-root weights are removed by substitution
/// (x = a + (b-a) sin^2 t for both ends, x = a + (b-a) u^2 for one), and the
/// resulting smooth integrand goes through globally adaptive 7/15-point
/// Gauss-Kronrod bisection. The returned pair is the one with the smallest
/// error estimate seen during refinement, so tightening a tolerance never
/// reports a larger estimate.
///
/// Throws Error{invalid_spec} for a malformed spec and Error{non_convergent}
/// when the tolerance is not met within the evaluation budget.
QuadResult integrate(const Integrand& f, const QuadSpec& spec);

/// int_0^1 g(s, 1-s) ds / sqrt(s(1-s)) after s = sin^2 t. The range is folded
/// onto t in [0, pi/4] so that s and 1-s both come from a sine or cosine of a
/// small angle and neither is formed by subtraction.
QuadResult integrate_arcsine(const std::function<double(double, double)>& g, double abs_tol = 1e-12,
                             double rel_tol = 1e-12);

/// Arithmetic-geometric mean, iterated until |a - b| <= 4 eps a.
double agm(double a, double b);

/// K(k) = int_0^1 dx / sqrt((1-x^2)(1-k^2 x^2)) for 0 <= k < 1.
double complete_elliptic_K(double k);

/// K evaluated from the complementary modulus k' = sqrt(1-k^2) > 0. Keeps full
/// precision when k is within rounding of 1.
double complete_elliptic_K_from_complement(double kp);

/// E(k) = int_0^{pi/2} sqrt(1 - k^2 sin^2 t) dt from the complementary modulus,
/// via the AGM with the Gauss sum of squared half-differences.
double complete_elliptic_E_from_complement(double kp);

}  // namespace elliptica::quad
