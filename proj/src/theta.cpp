#include "elliptica/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "elliptica/error.hpp"

namespace elliptica::theta {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTailExponent = 40.0;
constexpr double kMaxM = 200000.0;
constexpr double kMaxRelativeRounding = 1e-12;
constexpr double kMaxRelativeTail = 1e-14;
constexpr double kLogMax = 709.0;

// Neumaier compensated accumulator.
struct Compensated {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

void check_tau(double tau) {
  if (!(tau < 0.0) || !std::isfinite(tau)) throw Error(Errc::out_of_domain, "theta needs finite tau < 0");
}

}  // namespace

std::complex<double> ThetaValue::value() const {
  const double mag = std::abs(mantissa);
  if (mag == 0.0) return {0.0, 0.0};
  if (log_scale + std::log(mag) > kLogMax) throw Error(Errc::overflow, "theta value exceeds the double range");
  return mantissa * std::exp(log_scale);
}

double ThetaValue::log_abs() const { return log_scale + std::log(std::abs(mantissa)); }

ThetaValue theta_direct(const ThetaArgs& args) {
  check_tau(args.tau);
  const double a = -0.5 * args.tau;
  const double x = args.z.real();
  const double y = std::remainder(args.z.imag(), 2.0 * std::numbers::pi);
  if (!std::isfinite(x) || !std::isfinite(y)) throw Error(Errc::out_of_domain, "theta argument must be finite");

  // Theta(z0 + tau l) = Theta(z0) exp(-tau l^2 / 2 - z0 l) moves Re z into [-a, a].
  const double l = std::round(x / args.tau);
  const double x0 = x - args.tau * l;
  const double shift_log = a * l * l - x0 * l;
  const double shift_phase = std::remainder(-y * l, 2.0 * std::numbers::pi);
  if (!std::isfinite(shift_log)) throw Error(Errc::overflow, "theta argument too far from the fundamental strip");

  const double ax = std::abs(x0);
  const double m_real = std::ceil((ax + std::sqrt(ax * ax + 4.0 * a * kTailExponent)) / (2.0 * a));
  if (!(m_real <= kMaxM)) throw Error(Errc::slow_convergence, "direct theta series needs too many terms");
  int M = std::max(1, static_cast<int>(m_real));
  // ceil may land one short after rounding.
  while (a * M * M - ax * M < kTailExponent) ++M;

  auto exponent = [&](double m) { return -a * m * m + x0 * m; };
  const double peak = std::clamp(std::round(x0 / (2.0 * a)), -static_cast<double>(M), static_cast<double>(M));
  const double series_scale = exponent(peak);

  Compensated re;
  Compensated im;
  double abs_sum = 0.0;
  double rounding = 0.0;
  for (int m = -M; m <= M; ++m) {
    const double e = exponent(m) - series_scale;
    const double mag = std::exp(e);
    const double phase = y * m;
    re.add(mag * std::cos(phase));
    im.add(mag * std::sin(phase));
    abs_sum += mag;
    rounding += mag * (a * m * m + std::abs(x0 * m) + std::abs(series_scale) + std::abs(phase) + 4.0);
  }

  ThetaValue out;
  const std::complex<double> sum(re.value(), im.value());
  out.mantissa = sum * std::polar(1.0, shift_phase);
  out.log_scale = series_scale + shift_log;
  out.terms_used = 2 * M + 1;
  out.representation = Representation::direct;
  out.rounding_bound = kEps * (rounding + (2.0 + std::abs(y * l)) * abs_sum);
  const double next = M + 1.0;
  const double log_r = -a * (2.0 * next + 1.0) + ax;
  out.tail_bound = 2.0 * std::exp(-a * next * next + ax * next - series_scale) / (1.0 - std::exp(log_r));

  const double mag = std::abs(out.mantissa);
  if (!(out.rounding_bound <= kMaxRelativeRounding * mag))
    throw Error(Errc::slow_convergence, "direct theta series lost precision to cancellation");
  if (!(out.tail_bound <= kMaxRelativeTail * mag))
    throw Error(Errc::slow_convergence, "direct theta tail bound not below 1e-14 of the value");
  return out;
}

ThetaValue theta_dual(const ThetaArgs& args) {
  check_tau(args.tau);
  const double tau = args.tau;
  const std::complex<double> z = args.z;
  const double two_pi = 2.0 * std::numbers::pi;
  ThetaValue out = theta_direct({std::complex<double>(0.0, two_pi) * z / tau, two_pi * two_pi / tau});

  // -z^2 / (2 tau) = (y^2 - x^2) / (2 tau) - i x y / tau.
  const double x = z.real();
  const double y = z.imag();
  const double log_mag = (y * y - x * x) / (2.0 * tau) + 0.5 * std::log(two_pi / -tau);
  const double phase = -x * y / tau;
  const std::complex<double> rotation = std::polar(1.0, std::remainder(phase, two_pi));
  out.mantissa *= rotation;
  out.rounding_bound += kEps * (std::abs(phase) + 2.0) * std::abs(out.mantissa);
  if (!(out.rounding_bound <= kMaxRelativeRounding * std::abs(out.mantissa)))
    throw Error(Errc::slow_convergence, "dual theta prefactor lost precision");
  // The error in log_mag is conditioning of the value itself (x^2 / |tau|
  // large), not cancellation; it is reported but does not refuse the result.
  out.rounding_bound += kEps * std::abs(log_mag) * std::abs(out.mantissa);
  out.log_scale += log_mag;
  out.representation = Representation::poisson_dual;
  return out;
}

ThetaValue theta_auto(const ThetaArgs& args) {
  check_tau(args.tau);
  const bool direct_first = args.tau <= -2.0 * std::numbers::pi;
  try {
    return direct_first ? theta_direct(args) : theta_dual(args);
  } catch (const Error& first) {
    if (first.code() != Errc::slow_convergence) throw;
    try {
      return direct_first ? theta_dual(args) : theta_direct(args);
    } catch (const Error&) {
      throw first;
    }
  }
}

std::complex<double> ratio(const ThetaValue& num, const ThetaValue& den) {
  if (std::abs(den.mantissa) == 0.0) throw Error(Errc::evaluation_failure, "theta ratio with zero denominator");
  const std::complex<double> q = num.mantissa / den.mantissa;
  const double shift = num.log_scale - den.log_scale;
  if (std::abs(q) != 0.0 && shift + std::log(std::abs(q)) > kLogMax)
    throw Error(Errc::overflow, "theta ratio exceeds the double range");
  return q * std::exp(shift);
}

}  // namespace elliptica::theta
