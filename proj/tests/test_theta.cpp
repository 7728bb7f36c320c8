#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "elliptica/error.hpp"
#include "elliptica/theta.hpp"
#include "oracles.hpp"

using namespace elliptica;
using namespace elliptica::theta;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Plain long-double partial sum over |m| <= 400, no reductions.
std::complex<long double> brute_force(cd z, double tau) {
  std::complex<long double> s = 0;
  const std::complex<long double> zl(z.real(), z.imag());
  for (int m = -400; m <= 400; ++m) {
    const long double e = 0.5L * tau * m * m;
    if (e < -11000.0L) continue;
    s += std::exp(std::complex<long double>(e, 0) + zl * static_cast<long double>(m));
  }
  return s;
}

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("very negative tau leaves only the m = 0 term") {
  for (cd z : {cd(0, 0), cd(0.5, 1.0), cd(-2.0, -3.0)}) {
    const auto t = theta_direct({z, -1e6});
    CHECK(std::abs(t.value() - cd(1, 0)) < 1e-15);
    CHECK(t.representation == Representation::direct);
  }
}

TEST_CASE("Theta(0 | -1) and Theta(pi i | -1) against frozen values") {
  const auto a = theta_direct({0.0, -1.0});
  const auto b = theta_dual({0.0, -1.0});
  CHECK(rel_diff(a.value().real(), oracle::theta_0_m1) < 1e-14);
  CHECK(rel_diff(b.value().real(), oracle::theta_0_m1) < 1e-14);
  // Within 2e-8 of sqrt(2 pi): the dual series is 1 + 2 exp(-2 pi^2) + ...
  CHECK(std::abs(a.value().real() - std::sqrt(2 * kPi)) < 5e-8);

  const auto c = theta_direct({cd(0, kPi), -1.0});
  const auto d = theta_dual({cd(0, kPi), -1.0});
  CHECK(c.value().real() > 0.0);
  CHECK(std::abs(c.value().imag()) < 1e-16);
  CHECK(rel_diff(c.value().real(), oracle::theta_pii_m1) < 1e-13);
  CHECK(rel_diff(d.value().real(), oracle::theta_pii_m1) < 1e-13);
}

TEST_CASE("evenness and positivity on the real axis") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double tau : {-0.05, -1.0, -7.0, -20.0}) {
    for (int i = 0; i < 20; ++i) {
      const cd z(u(rng), u(rng));
      const auto p = theta_auto({z, tau});
      const auto m = theta_auto({-z, tau});
      CHECK(rel(p.value(), m.value()) < 1e-12);
      const auto r = theta_auto({z.real(), tau});
      CHECK(r.value().real() > 0.0);
      CHECK(std::abs(r.value().imag()) <= 1e-15 * r.value().real());
    }
  }
}

TEST_CASE("self-dual modulus") {
  const double tau = -2 * kPi;
  for (cd z : {cd(0, 0), cd(0.3, 0), cd(0, 1.1), cd(0.4, -0.7)}) {
    CHECK(rel(theta_direct({z, tau}).value(), theta_dual({z, tau}).value()) < 1e-12);
  }
}

TEST_CASE("tau = -0.01: few dual terms, agreement with the direct series") {
  const auto d = theta_direct({0.0, -0.01});
  const auto p = theta_dual({0.0, -0.01});
  CHECK(p.terms_used <= 5);
  CHECK(d.terms_used > 100);
  CHECK(rel_diff(d.value().real(), p.value().real()) < 1e-12);
  CHECK(rel_diff(p.value().real(), oracle::theta_0_m001) < 1e-13);
}

TEST_CASE("against a brute-force long-double sum") {
  // Either series may refuse a badly conditioned point; what it returns must be right.
  int accepted = 0;
  for (double tau : {-0.3, -1.0, -4.0, -15.0}) {
    for (cd z : {cd(0, 0), cd(0.2, 0.7), cd(-1.0, 2.5), cd(0.3, -kPi)}) {
      const auto ref = brute_force(z, tau);
      const cd r(static_cast<double>(ref.real()), static_cast<double>(ref.imag()));
      CAPTURE(tau);
      CAPTURE(z);
      CHECK(rel(theta_auto({z, tau}).value(), r) < 1e-12);
      for (auto f : {&theta_direct, &theta_dual}) {
        try {
          const cd v = f({z, tau}).value();
          CHECK(rel(v, r) < 1e-12);
          ++accepted;
        } catch (const Error& e) {
          CHECK(e.code() == Errc::slow_convergence);
        }
      }
    }
  }
  CHECK(accepted >= 24);
}

TEST_CASE("Poisson duality on a 3 x 5 grid") {
  for (double tau : {-20.0, -1.0, -0.01}) {
    for (cd z : {cd(0, 0), cd(0.5, 0), cd(-1.2, 0), cd(0.3, 0.2), cd(0, 0.1)}) {
      CAPTURE(tau);
      CAPTURE(z);
      CHECK(rel(theta_direct({z, tau}).value(), theta_dual({z, tau}).value()) < 1e-10);
    }
  }
}

TEST_CASE("shift identity over (n, l) in {-2..2}^2") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double tau : {-0.05, -1.0, -20.0}) {
    for (int i = 0; i < 20; ++i) {
      const cd z(u(rng), 3.0 * u(rng));
      const auto base = theta_auto({z, tau});
      for (int n = -2; n <= 2; ++n) {
        for (int l = -2; l <= 2; ++l) {
          const cd shifted = z + cd(0, 2 * kPi * n) + tau * static_cast<double>(l);
          const auto s = theta_auto({shifted, tau});
          const cd factor = std::exp(cd(-0.5 * tau * l * l, 0) - z * static_cast<double>(l));
          const cd expected = base.value() * factor;
          CAPTURE(tau);
          CAPTURE(z);
          CAPTURE(n);
          CAPTURE(l);
          CHECK(rel(s.value(), expected) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("representation choice") {
  CHECK(theta_auto({0.0, -100.0}).representation == Representation::direct);
  CHECK(theta_auto({0.0, -0.001}).representation == Representation::poisson_dual);
  const double eps = 1e-6;
  for (cd z : {cd(0, 0), cd(0.7, 0.3), cd(0, kPi)}) {
    const auto below = theta_auto({z, -2 * kPi - eps});
    const auto above = theta_auto({z, -2 * kPi + eps});
    CHECK(below.representation == Representation::direct);
    CHECK(above.representation == Representation::poisson_dual);
    // The switch adds nothing to the genuine change of Theta over 2e-6 in tau.
    const cd genuine = theta_dual({z, -2 * kPi - eps}).value() - theta_dual({z, -2 * kPi + eps}).value();
    CHECK(std::abs((below.value() - above.value()) - genuine) < 1e-13);
  }
}

TEST_CASE("certificates") {
  for (double tau : {-0.01, -1.0, -20.0, -500.0}) {
    for (cd z : {cd(0, 0), cd(3.0, 1.0), cd(-0.4, 9.0)}) {
      const auto t = theta_auto({z, tau});
      const double mag = std::abs(t.mantissa);
      CHECK(t.tail_bound <= 1e-14 * mag);
      CHECK(t.tail_bound >= 0.0);
      CHECK(t.rounding_bound <= 1e-12 * mag);
      CHECK(t.terms_used >= 1);
    }
  }
}

TEST_CASE("too many terms signals slow convergence, and auto dualizes") {
  try {
    theta_direct({0.0, -1e-12});
    FAIL("expected slow_convergence");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::slow_convergence);
  }
  const auto t = theta_auto({0.0, -1e-12});
  CHECK(t.representation == Representation::poisson_dual);
  CHECK(rel_diff(t.log_abs(), 0.5 * std::log(2 * kPi / 1e-12)) < 1e-15);
}

TEST_CASE("large prefactors stay in log space") {
  // Theta(x | tau) ~ exp(-x^2 / (2 tau)) sqrt(2 pi / -tau) for x far outside the strip.
  const auto t = theta_dual({100.0, -0.5});
  CHECK(std::isfinite(t.log_abs()));
  CHECK(t.log_abs() == doctest::Approx(10000.0 + 0.5 * std::log(4 * kPi)).epsilon(1e-12));
  try {
    (void)t.value();
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::overflow);
  }
  const auto d = theta_direct({100.0, -0.5});
  CHECK(d.log_abs() == doctest::Approx(t.log_abs()).epsilon(1e-13));
  // Ratios combine the scales first.
  const auto num = theta_direct({100.5, -0.5});
  const cd r = ratio(num, d);
  CHECK(std::isfinite(r.real()));
}

TEST_CASE("invalid modulus") {
  CHECK_THROWS_AS(theta_direct({0.0, 0.0}), Error);
  CHECK_THROWS_AS(theta_dual({0.0, 1.0}), Error);
  CHECK_THROWS_AS(theta_auto({0.0, std::nan("")}), Error);
}
