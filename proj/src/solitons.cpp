#include "elliptica/solitons.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace elliptica::solitons {
namespace {

using boost::multiprecision::cpp_int;

constexpr int kExactHankelMax = 6;

void check_n(int n) {
  if (n < 1) throw Error(Errc::out_of_domain, "soliton index must be >= 1");
}

cpp_int bareiss_det(std::vector<std::vector<cpp_int>> a) {
  const std::size_t n = a.size();
  cpp_int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// (2m + 1)!! = Gamma(m + 3/2) 2^{m+1} / sqrt(pi).
cpp_int odd_double_factorial(int m) {
  cpp_int r = 1;
  for (int j = 3; j <= 2 * m + 1; j += 2) r *= j;
  return r;
}

cpp_int factorial(int m) {
  cpp_int r = 1;
  for (int j = 2; j <= m; ++j) r *= j;
  return r;
}

double log_hankel_float(int k, double b) {
  std::vector<std::vector<long double>> a(k, std::vector<long double>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a[i][j] = std::tgamma(static_cast<long double>(i + j) + b);
  long double log_det = 0.0L;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    const long double p = a[col][col];
    if (p == 0.0L) throw Error(Errc::evaluation_failure, "singular Hankel matrix");
    log_det += std::log(std::abs(p));
    for (int r = col + 1; r < k; ++r) {
      const long double f = a[r][col] / p;
      for (int j = col; j < k; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return static_cast<double>(log_det);
}

}  // namespace

double alpha_exact(const wave::WaveState& s, int n, const Background& bg) {
  check_n(n);
  const double c = bg.c;
  // 2c (x - 4c^2 t) = -8 c^3 t v.
  return -8.0 * c * c * c * s.t * s.v + (2.0 * n - 0.5) * std::log(s.t) -
         0.25 * s.periods.tau_star * (s.z - 2.0 * n + 1.0);
}

double alpha_exact(double x, double t, int n, const Background& bg) {
  return alpha_exact(wave::wave_state(x, t, bg), n, bg);
}

double alpha_asymptotic_v(double v, double t, int n, const Background& bg) {
  check_n(n);
  if (!(v > 0.0 && v < 1.0)) throw Error(Errc::out_of_domain, "asymptotic phase needs 0 < v < 1");
  if (!(t > 0.0)) throw Error(Errc::out_of_domain, "t must be positive");
  const double c = bg.c;
  const double L = -std::log(v);
  return -(2.0 * n - 0.5) * std::log(L / (v * t)) - 8.0 * c * c * c * t * v / L - (6.0 * n - 3.5) * std::numbers::ln2;
}

double alpha_asymptotic(double x, double t, int n, const Background& bg) {
  if (!(t > 0.0)) throw Error(Errc::out_of_domain, "t must be positive");
  const double edge = 4.0 * bg.c * bg.c * t;
  return alpha_asymptotic_v((edge - x) / edge, t, n, bg);
}

double alpha_limit(int m, const Background& bg) {
  check_n(m);
  const double k = 2.0 * m - 0.5;
  const double c = bg.c;
  return k * std::log(k / (8.0 * c * c * c * std::numbers::e)) - (6.0 * m - 3.5) * std::numbers::ln2;
}

double train_sum(const wave::WaveState& s, int N, const Background& bg) {
  check_n(N);
  double sum = 0.0;
  for (int n = 1; n <= N; ++n) {
    // Same quantity as 2c(x - 4c^2 t) + (2n - 1/2) log t - alpha_n, without the cancellation.
    const double arg = 0.25 * s.periods.tau_star * (s.z - 2.0 * n + 1.0);
    sum += 2.0 * bg.c / std::cosh(arg);
  }
  return sum;
}

double train_sum(double x, double t, int N, const Background& bg) {
  return train_sum(wave::wave_state(x, t, bg), N, bg);
}

double TrainWindow::v_at(double k, double t, const Background& bg) {
  const double c = bg.c;
  return k * std::log(t) / (8.0 * c * c * c * t);
}

double TrainWindow::v_a_lo(const Background& bg) const { return v_at(2.0 * N + 0.5 - epsilon, t, bg); }
double TrainWindow::v_a_hi(const Background& bg) const { return v_at(0.5 + epsilon, t, bg); }
double TrainWindow::v_b_lo(const Background& bg) const { return v_at(1.0 - epsilon, t, bg); }

TrainWindow train_window(int N, double epsilon, double t, const Background& bg) {
  if (N < 1) throw Error(Errc::window_empty, "N must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 0.25)) throw Error(Errc::window_empty, "epsilon must lie in (0, 1/4)");
  if (!(t > 1.0) || !std::isfinite(t)) throw Error(Errc::window_empty, "window needs t > 1 so that log t > 0");
  const double c = bg.c;
  TrainWindow w;
  w.N = N;
  w.epsilon = epsilon;
  w.t = t;
  const double edge = 4.0 * c * c * t;
  const double lt = std::log(t) / (2.0 * c);
  w.a_lo = edge - (2.0 * N + 0.5 - epsilon) * lt;
  w.a_hi = edge - (0.5 + epsilon) * lt;
  w.b_lo = edge - (1.0 - epsilon) * lt;
  w.b_hi = edge;
  if (!(w.v_a_lo(bg) < 2.5)) throw Error(Errc::window_empty, "window reaches past the modulated zone at this t");
  return w;
}

double interval_threshold(double epsilon, int N, const Background& bg) {
  auto holds = [&](double log_t) {
    const double t = std::exp(log_t);
    TrainWindow w;
    try {
      w = train_window(N, epsilon, t, bg);
    } catch (const Error& e) {
      if (e.code() == Errc::window_empty) return false;
      throw;
    }
    if (wave::wave_state_v(w.v_a_hi(bg), t, bg).z < 0.0) return false;
    if (wave::wave_state_v(w.v_a_lo(bg), t, bg).z > 2.0 * N) return false;
    return wave::wave_state_v(w.v_b_lo(bg), t, bg).z <= 0.5;
  };
  if (N < 1) throw Error(Errc::window_empty, "N must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 0.25)) throw Error(Errc::window_empty, "epsilon must lie in (0, 1/4)");

  constexpr double kStep = 0.5 * std::numbers::ln10;
  double prev = 0.0;
  double found = -1.0;
  for (double lt = std::numbers::ln2; lt <= 600.0; lt += kStep) {
    if (holds(lt)) {
      found = lt;
      break;
    }
    prev = lt;
  }
  if (found < 0.0) return std::numeric_limits<double>::infinity();
  double lo = prev;
  double hi = found;
  for (int i = 0; i < 60 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid))
      hi = mid;
    else
      lo = mid;
  }
  return std::exp(hi);
}

double log_hankel_gamma(int k, double b, bool* exact) {
  if (k < 0) throw Error(Errc::out_of_domain, "Hankel order must be >= 0");
  if (!(b > 0.0)) throw Error(Errc::out_of_domain, "Hankel shift b must be positive");
  if (exact) *exact = true;
  if (k == 0) return 0.0;
  const bool integer_shift = b == 1.0;
  const bool half_shift = b == 1.5;
  if (k <= kExactHankelMax && (integer_shift || half_shift)) {
    std::vector<std::vector<cpp_int>> a(k, std::vector<cpp_int>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a[i][j] = integer_shift ? factorial(i + j) : odd_double_factorial(i + j);
    const double det = bareiss_det(std::move(a)).convert_to<double>();
    if (integer_shift) return std::log(det);
    // Gamma(m + 3/2) = sqrt(pi) (2m+1)!! / 2^{m+1}; rows give pi^{k/2} 2^{-k(k+1)/2}, columns 2^{-k(k-1)/2}.
    return std::log(det) + 0.5 * k * std::log(std::numbers::pi) - static_cast<double>(k) * k * std::numbers::ln2;
  }
  if (exact) *exact = false;
  return log_hankel_float(k, b);
}

KhruslovPhase khruslov_phase(int n, const Background& bg, double h0) {
  check_n(n);
  if (!(h0 != 0.0) || !std::isfinite(h0)) throw Error(Errc::invalid_h0, "h0 must be finite and nonzero");
  const double c = bg.c;
  const double base = std::log(std::abs(h0)) - (2.0 * n - 1.0) * std::log(4.0) - (6.0 * n - 3.0) * std::log(2.0 * c);
  KhruslovPhase out;
  out.simple = base + std::lgamma(static_cast<double>(n)) + std::lgamma(n + 0.5);
  bool e1 = false, e2 = false, e3 = false, e4 = false;
  const double hankel = log_hankel_gamma(n, 1.0, &e1) + log_hankel_gamma(n, 1.5, &e2) -
                        log_hankel_gamma(n - 1, 1.0, &e3) - log_hankel_gamma(n - 1, 1.5, &e4);
  out.determinant = base - 2.0 * std::lgamma(static_cast<double>(n)) + hankel;
  out.exact = e1 && e2 && e3 && e4;
  return out;
}

MismatchReport phase_mismatch_report(int m, const Background& bg, double h0, std::span<const double> t_grid) {
  check_n(m);
  const double c = bg.c;
  const KhruslovPhase k = khruslov_phase(m, bg, h0);
  MismatchReport r;
  r.m = m;
  r.h0 = h0;
  r.c = c;
  r.khruslov_simple = k.simple;
  r.khruslov_det = k.determinant;
  r.alpha_limit = alpha_limit(m, bg);
  r.mismatch = k.simple - r.alpha_limit;
  r.q_el_limit = 2.0 * c / std::cosh(r.mismatch);
  r.khruslov_prediction = 2.0 * c;
  for (double t : t_grid) {
    if (!(t > 1.0)) throw Error(Errc::out_of_domain, "curve needs t > 1");
    const double lt = std::log(t);
    CurveRow row;
    row.t = t;
    row.v = ((2.0 * m - 0.5) * lt - k.simple) / (8.0 * c * c * c * t);
    const wave::WaveState s = wave::wave_state_v(row.v, t, bg);
    row.x = s.x;
    row.q_el = wave::q_el_dual(s, bg).q;
    row.alpha_exact = alpha_exact(s, m, bg);
    row.error = std::abs(row.q_el - r.q_el_limit);
    const double llt = std::log(lt);
    row.envelope = llt * llt / lt;
    row.ratio = row.error / row.envelope;
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace elliptica::solitons
