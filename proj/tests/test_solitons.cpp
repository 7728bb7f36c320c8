#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "elliptica/error.hpp"
#include "elliptica/solitons.hpp"
#include "elliptica/wave.hpp"
#include "oracles.hpp"

using namespace elliptica;
using namespace elliptica::solitons;

namespace {

constexpr double kLn2 = std::numbers::ln2;

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::evaluation_failure;
}

// Second transcription of the printed truncation, written from the sum of its
// pieces rather than the grouped form.
double alpha_asym_second(double v, double t, int n, double c) {
  const double L = std::log(1.0 / v);
  const double k = 2 * n - 0.5;
  return -k * std::log(L) + k * std::log(v) + k * std::log(t) - 8 * c * c * c * t * v / L - 6 * n * kLn2 + 3.5 * kLn2;
}

// log prod_{j<k} j! Gamma(j + b)
double log_hankel_product(int k, double b) {
  double s = 0.0;
  for (int j = 0; j < k; ++j) s += std::lgamma(j + 1.0) + std::lgamma(j + b);
  return s;
}

}  // namespace

TEST_CASE("alpha limit m = 1 and m = 2 against frozen values and a second transcription") {
  const Background bg(1.0);
  CHECK(std::abs(alpha_limit(1, bg) - oracle::alpha_limit_1) < 1e-14);
  CHECK(std::abs(alpha_limit(2, bg) - oracle::alpha_limit_2) < 1e-13);
  CHECK(std::abs(alpha_limit(1, bg) - (1.5 * std::log(3.0 / (16.0 * std::numbers::e)) - 2.5 * kLn2)) < 1e-14);
  CHECK(std::abs(alpha_limit(2, bg) - (3.5 * std::log(3.5 / (8.0 * std::numbers::e)) - 8.5 * kLn2)) < 1e-13);
}

TEST_CASE("alpha limit scales as -3 (2m - 1/2) log c") {
  for (int m : {1, 2, 5}) {
    for (double c : {0.5, 2.0, 10.0}) {
      const double shift = alpha_limit(m, Background(c)) - alpha_limit(m, Background(1.0));
      CHECK(std::abs(shift + 3.0 * (2 * m - 0.5) * std::log(c)) < 1e-12);
    }
  }
  CHECK(code_of([] { alpha_limit(0, Background(1.0)); }) == Errc::out_of_domain);
}

TEST_CASE("asymptotic phase: double entry and n-dependence") {
  const Background bg(1.0);
  const double v = 1e-3, t = 1e4;
  CHECK(std::abs(alpha_asymptotic_v(v, t, 1, bg) - alpha_asym_second(v, t, 1, 1.0)) < 1e-12);
  for (double c : {1.0, 1.5}) {
    const Background b(c);
    for (int n = 1; n <= 4; ++n) {
      const double step = alpha_asymptotic_v(v, t, n + 1, b) - alpha_asymptotic_v(v, t, n, b);
      CHECK(std::abs(step - (-2.0 * std::log(std::log(1.0 / v) / (v * t)) - 6.0 * kLn2)) < 1e-12);
    }
  }
  const double x = 4.0 * t * (1 - v);
  CHECK(std::abs(alpha_asymptotic(x, t, 2, bg) - alpha_asymptotic_v(v, t, 2, bg)) < 1e-9);
  CHECK(code_of([&] { alpha_asymptotic_v(1.0, t, 1, bg); }) == Errc::out_of_domain);
}

TEST_CASE("asymptotic phase on the curve v t / log(1/v) = (2m - 1/2)/(8 c^3) equals the limit") {
  const Background bg(1.0);
  for (int m : {1, 2}) {
    const double k = (2 * m - 0.5) / 8.0;
    for (double t : {1e4, 1e8, 1e16, 1e32}) {
      // Solve v t = k log(1/v) by fixed point; on the exact curve the truncation equals the limit.
      double v = k * std::log(t) / t;
      for (int i = 0; i < 200; ++i) v = k * std::log(1.0 / v) / t;
      CHECK(std::abs(alpha_asymptotic_v(v, t, m, bg) - alpha_limit(m, bg)) < 1e-9);
    }
  }
}

TEST_CASE("exact phase is bounded on log windows and tracks the truncation") {
  const Background bg(1.0);
  for (double t : {1e3, 1e4, 1e5}) {
    const double lt = std::log(t);
    double sup = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double x = 4 * t - (2.0 - 1.5 * i / 40.0) * lt;
      const auto s = wave::wave_state(x, t, bg);
      const double a = alpha_exact(s, 1, bg);
      sup = std::max(sup, std::abs(a));
      const double L = std::log(1.0 / s.v);
      const double env = std::pow(std::log(L), 2) / L;
      CHECK(std::abs(a - alpha_asymptotic_v(s.v, t, 1, bg)) <= 10.0 * env);
    }
    CAPTURE(t);
    CHECK(sup < 20.0);
  }
}

TEST_CASE("alpha_exact reproduces its defining relation") {
  const Background bg(1.0);
  const double t = 2e3;
  const auto s = wave::wave_state_v(3e-3, t, bg);
  for (int n = 1; n <= 3; ++n) {
    const double lhs = 0.25 * s.periods.tau_star * (s.z - 2 * n + 1);
    const double rhs = 2.0 * (s.x - 4 * t) + (2 * n - 0.5) * std::log(t) - alpha_exact(s, n, bg);
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("train sum: peaks at 2c, separated by about log t / c") {
  const Background bg(1.0);
  const double t = 1e5;
  const auto w = train_window(2, 0.05, t, bg);
  // At this t the negative alpha_2 puts the second peak just left of the
  // part-A window, so scan a log t further out.
  const double lo = w.a_lo - std::log(t);
  std::vector<double> xs, qs;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (w.a_hi - lo) * i / n;
    xs.push_back(x);
    qs.push_back(train_sum(x, t, 2, bg));
  }
  std::vector<double> peaks;
  for (int i = 1; i < n; ++i)
    if (qs[i] > qs[i - 1] && qs[i] >= qs[i + 1] && qs[i] > 1.0) peaks.push_back(xs[i]);
  REQUIRE(peaks.size() == 2);
  CHECK(*std::max_element(qs.begin(), qs.end()) == doctest::Approx(2.0).epsilon(1e-4));
  // x_n = 4t - (2n - 1/2) log t / 2 + alpha_n / 2 at each peak.
  const double predicted = std::log(t) + 0.5 * (alpha_exact(peaks[1], t, 1, bg) - alpha_exact(peaks[0], t, 2, bg));
  const double step = (w.a_hi - lo) / n;
  CHECK(std::abs((peaks[1] - peaks[0]) - predicted) < 2.0 * step + 0.01);
}

TEST_CASE("train sum with N = 1 is the first summand of N = 2") {
  const Background bg(1.0);
  const double t = 1e4;
  const auto w = train_window(2, 0.05, t, bg);
  for (int i = 0; i <= 20; ++i) {
    const auto s = wave::wave_state(w.a_lo + (w.a_hi - w.a_lo) * i / 20.0, t, bg);
    const double one = train_sum(s, 1, bg);
    const double two = train_sum(s, 2, bg);
    const double second = 2.0 / std::cosh(0.25 * s.periods.tau_star * (s.z - 3.0));
    CHECK(std::abs(two - one - second) < 1e-14);
    CHECK(alpha_exact(s, 1, bg) == alpha_exact(s, 1, bg));
  }
}

TEST_CASE("window geometry and empty windows") {
  const Background bg(2.0);
  const double t = 1e4;
  const auto w = train_window(3, 0.1, t, bg);
  const double lt = std::log(t) / 4.0;
  CHECK(w.a_lo == doctest::Approx(16 * t - 6.4 * lt));
  CHECK(w.a_hi == doctest::Approx(16 * t - 0.6 * lt));
  CHECK(w.b_lo == doctest::Approx(16 * t - 0.9 * lt));
  CHECK(w.b_hi == 16 * t);
  CHECK(w.a_lo < w.a_hi);
  CHECK(w.b_lo < w.b_hi);
  CHECK(TrainWindow::v_at(1.0, t, bg) == doctest::Approx(std::log(t) / (64.0 * t)));
  CHECK(code_of([&] { train_window(0, 0.1, t, bg); }) == Errc::window_empty);
  CHECK(code_of([&] { train_window(2, 0.25, t, bg); }) == Errc::window_empty);
  CHECK(code_of([&] { train_window(2, 0.0, t, bg); }) == Errc::window_empty);
  CHECK(code_of([&] { train_window(2, 0.1, 1.0, bg); }) == Errc::window_empty);
  // (2N + 1/2) log t / (8 c^3 t) >= 5/2 at small t.
  CHECK(code_of([] { train_window(50, 0.1, 2.0, Background(0.3)); }) == Errc::window_empty);
}

TEST_CASE("interval threshold separates failing and holding windows") {
  // With epsilon = 0.2 and N = 1 the threshold is within desk range.
  const Background bg(1.0);
  const double eps = 0.2;
  const double T = interval_threshold(eps, 1, bg);
  REQUIRE(std::isfinite(T));
  auto maps = [&](double t) {
    const auto w = train_window(1, eps, t, bg);
    const double za = wave::wave_state_v(w.v_a_hi(bg), t, bg).z;
    const double zb = wave::wave_state_v(w.v_a_lo(bg), t, bg).z;
    const double zq = wave::wave_state_v(w.v_b_lo(bg), t, bg).z;
    return za >= 0.0 && zb <= 2.0 && zq <= 0.5;
  };
  CHECK(maps(T * 1.01));
  CHECK(maps(T * 100.0));
  CHECK_FALSE(maps(T * 0.99));
  CHECK(code_of([&] { interval_threshold(0.3, 1, bg); }) == Errc::window_empty);
}

TEST_CASE("Khruslov phases: n = 1 closed form, agreement of both forms") {
  const Background bg(1.0);
  const auto k1 = khruslov_phase(1, bg, 1.0);
  const double n1 = std::log((std::sqrt(std::numbers::pi) / 2.0) / (4.0 * 8.0));
  CHECK(std::abs(k1.simple - n1) < 1e-14);
  CHECK(std::abs(k1.determinant - n1) < 1e-14);
  CHECK(std::abs(k1.simple - oracle::khruslov_1) < 1e-14);
  CHECK(k1.exact);
  const auto k2 = khruslov_phase(2, bg, 1.0);
  CHECK(std::abs(k2.simple - oracle::khruslov_2) < 1e-13);
  CHECK(std::abs(k2.determinant - oracle::khruslov_2) < 1e-13);
  for (int n = 1; n <= 12; ++n) {
    const auto k = khruslov_phase(n, Background(1.3), -2.0);
    CAPTURE(n);
    CHECK(std::abs(k.simple - k.determinant) < 1e-9 * std::max(1.0, std::abs(k.simple)));
    CHECK(k.exact == (n <= 6));
  }
}

TEST_CASE("Hankel determinants of Gamma values match the product formula") {
  for (double b : {1.0, 1.5, 2.25}) {
    for (int k = 0; k <= 8; ++k) {
      bool exact = false;
      const double v = log_hankel_gamma(k, b, &exact);
      CAPTURE(b);
      CAPTURE(k);
      CHECK(std::abs(v - log_hankel_product(k, b)) < 1e-10 * std::max(1.0, std::abs(v)));
      if (k <= 6 && b != 2.25)
        CHECK(exact);
    }
  }
  // 2x2 by hand: det [[0!, 1!], [1!, 2!]] = 1.
  CHECK(std::abs(log_hankel_gamma(2, 1.0)) < 1e-15);
  CHECK(std::abs(log_hankel_gamma(1, 1.5) - std::log(std::tgamma(1.5))) < 1e-15);
  CHECK(code_of([] { log_hankel_gamma(-1, 1.0); }) == Errc::out_of_domain);
}

TEST_CASE("Khruslov phases shift by log|h0'/h0| and reject h0 = 0") {
  const Background bg(1.0);
  for (int n : {1, 2, 3}) {
    const auto a = khruslov_phase(n, bg, 1.0);
    const auto b = khruslov_phase(n, bg, -7.5);
    CHECK(std::abs(b.simple - a.simple - std::log(7.5)) < 1e-13);
    CHECK(std::abs(b.determinant - a.determinant - std::log(7.5)) < 1e-13);
  }
  CHECK(code_of([&] { khruslov_phase(1, bg, 0.0); }) == Errc::invalid_h0);
  CHECK(code_of([&] { khruslov_phase(1, bg, INFINITY); }) == Errc::invalid_h0);
}

TEST_CASE("mismatch report: c = 1, h0 = 1, m = 1") {
  const Background bg(1.0);
  const std::vector<double> ts = {1e4, 1e6, 1e8};
  const auto r = phase_mismatch_report(1, bg, 1.0, ts);
  CHECK(r.mismatch == doctest::Approx(oracle::khruslov_1 - oracle::alpha_limit_1).epsilon(1e-14));
  CHECK(std::abs(r.mismatch) > 1.0);
  CHECK(r.q_el_limit == doctest::Approx(2.0 / std::cosh(r.mismatch)));
  CHECK(r.khruslov_prediction == 2.0);
  REQUIRE(r.rows.size() == 3);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].ratio < 1.0);
    if (i > 0) CHECK(r.rows[i].error < r.rows[i - 1].error);
    CHECK(std::abs(r.rows[i].alpha_exact - r.alpha_limit) < 3.0 * r.rows[i].envelope);
  }
}

TEST_CASE("mismatch report with the phases matched converges to 2c") {
  const Background bg(1.0);
  const double h0 = std::exp(alpha_limit(1, bg) - khruslov_phase(1, bg, 1.0).simple);
  const std::vector<double> ts = {1e4, 1e6, 1e8};
  const auto r = phase_mismatch_report(1, bg, h0, ts);
  CHECK(std::abs(r.mismatch) < 1e-12);
  CHECK(r.q_el_limit == doctest::Approx(2.0));
  for (const auto& row : r.rows) CHECK(row.error < 3.0 * row.envelope);
  CHECK(r.rows.back().error < r.rows.front().error);
}
