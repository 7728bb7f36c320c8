#include "elliptica/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <vector>

#include "elliptica/error.hpp"

namespace elliptica {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_spec: return "InvalidSpec";
    case Errc::non_convergent: return "NonConvergent";
    case Errc::out_of_domain: return "OutOfDomain";
    case Errc::modulus_out_of_range: return "ModulusOutOfRange";
    case Errc::slow_convergence: return "SlowConvergence";
    case Errc::overflow: return "Overflow";
    case Errc::invalid_h0: return "InvalidH0";
    case Errc::window_empty: return "WindowEmpty";
    case Errc::evaluation_failure: return "EvaluationFailure";
  }
  return "Unknown";
}

}  // namespace elliptica

namespace elliptica::quad {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae on [0, 1] of the symmetric 15-point rule; odd indices are
// the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Segment gauss_kronrod15(const F& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = g(center - dx);
    f2[j] = g(center + dx);
    resk += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return {a, b, value, err};
}

template <class F>
QuadResult adaptive(const F& g, double a, double b, const QuadSpec& spec) {
  std::size_t evaluations = 0;
  auto error_less = [](const Segment& x, const Segment& y) { return x.error < y.error; };

  std::vector<Segment> heap;
  heap.push_back(gauss_kronrod15(g, a, b));
  evaluations += 15;
  double total = heap.front().value;
  double total_err = heap.front().error;
  QuadResult best{total, total_err, evaluations};

  // Segments too narrow to split are retired; their error stays in the total.
  double retired_err = 0.0;
  while (true) {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_err <= tol) break;
    if (heap.empty() || evaluations + 30 > spec.max_evaluations) {
      // The best pair may still be acceptable under its own value.
      if (best.error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(best.value))) return best;
      char buf[96];
      std::snprintf(buf, sizeof buf, "quadrature tolerance not met (error estimate %.3g, value %.17g)",
                    best.error_estimate, best.value);
      throw Error(Errc::non_convergent, buf);
    }
    std::pop_heap(heap.begin(), heap.end(), error_less);
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 8.0 * kEps * std::max(std::abs(mid), 1e-300)) {
      retired_err += worst.error;
      continue;
    }
    const Segment left = gauss_kronrod15(g, worst.a, mid);
    const Segment right = gauss_kronrod15(g, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), error_less);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), error_less);

    // Re-sum occasionally so the running totals do not drift.
    if (evaluations % 3000 < 30) {
      total = 0.0;
      total_err = retired_err;
      for (const auto& s : heap) {
        total += s.value;
        total_err += s.error;
      }
    } else {
      total_err += left.error + right.error - worst.error;
    }
    if (total_err < best.error_estimate) best = {total, total_err, evaluations};
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace

EndpointOrder endpoint_order(double exponent) {
  if (exponent == 0.0) return EndpointOrder::regular;
  if (exponent == -0.5) return EndpointOrder::inverse_sqrt;
  throw Error(Errc::invalid_spec, "endpoint exponent must be 0 or -1/2");
}

QuadResult integrate(const Integrand& f, const QuadSpec& spec) {
  const double a = spec.lower;
  const double b = spec.upper;
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw Error(Errc::invalid_spec, "integration interval must satisfy lower < upper");
  if (!(spec.abs_tol >= 0.0) || !(spec.rel_tol >= 0.0) || (spec.abs_tol == 0.0 && spec.rel_tol == 0.0))
    throw Error(Errc::invalid_spec, "at least one non-negative tolerance must be positive");
  if (spec.max_evaluations < 15) throw Error(Errc::invalid_spec, "evaluation budget too small");

  const double width = b - a;
  const bool left = spec.left == EndpointOrder::inverse_sqrt;
  const bool right = spec.right == EndpointOrder::inverse_sqrt;

  if (left && right) {
    // dx / sqrt((x-a)(b-x)) = 2 dt; the long side is measured from its own end.
    auto g = [&](double t) {
      const double s = std::sin(t);
      const double c = std::cos(t);
      const double x = t < std::numbers::pi / 4 ? a + width * s * s : b - width * c * c;
      return 2.0 * f(x);
    };
    return adaptive(g, 0.0, std::numbers::pi / 2, spec);
  }
  if (left || right) {
    const double scale = 2.0 * std::sqrt(width);
    auto g = [&](double u) { return scale * f(left ? a + width * u * u : b - width * u * u); };
    return adaptive(g, 0.0, 1.0, spec);
  }
  return adaptive(f, a, b, spec);
}

QuadResult integrate_arcsine(const std::function<double(double, double)>& g, double abs_tol, double rel_tol) {
  QuadSpec spec;
  spec.upper = std::numbers::pi / 4;
  spec.abs_tol = abs_tol;
  spec.rel_tol = rel_tol;
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0))
    throw Error(Errc::invalid_spec, "at least one non-negative tolerance must be positive");
  auto folded = [&](double t) {
    const double s = std::sin(t);
    const double c = std::cos(t);
    return 2.0 * (g(s * s, c * c) + g(c * c, s * s));
  };
  return adaptive(folded, 0.0, std::numbers::pi / 4, spec);
}

double agm(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(Errc::invalid_spec, "agm requires finite non-negative arguments");
  if (a == 0.0 || b == 0.0) return 0.0;
  for (int i = 0; i < 100 && std::abs(a - b) > 4.0 * kEps * a; ++i) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return a;
}

double complete_elliptic_K(double k) {
  if (!(k >= 0.0) || !(k < 1.0)) throw Error(Errc::modulus_out_of_range, "complete_elliptic_K requires 0 <= k < 1");
  return complete_elliptic_K_from_complement(std::sqrt((1.0 - k) * (1.0 + k)));
}

double complete_elliptic_K_from_complement(double kp) {
  if (!(kp > 0.0) || !(kp <= 1.0))
    throw Error(Errc::modulus_out_of_range, "complementary modulus must lie in (0, 1]");
  return std::numbers::pi / (2.0 * agm(1.0, kp));
}

double complete_elliptic_E_from_complement(double kp) {
  if (!(kp > 0.0) || !(kp <= 1.0))
    throw Error(Errc::modulus_out_of_range, "complementary modulus must lie in (0, 1]");
  double a = 1.0;
  double b = kp;
  // c_0^2 = k^2 = (1-k')(1+k'), then c_n = (a_{n-1} - b_{n-1}) / 2.
  double sum = 0.5 * (1.0 - kp) * (1.0 + kp);
  double weight = 0.5;
  for (int i = 0; i < 100 && std::abs(a - b) > 4.0 * kEps * a; ++i) {
    const double cn = 0.5 * (a - b);
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
    weight *= 2.0;
    sum += weight * cn * cn;
  }
  return std::numbers::pi / (2.0 * a) * (1.0 - sum);
}

}  // namespace elliptica::quad
