#include "elliptica/cli/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "elliptica/abelian.hpp"
#include "elliptica/asymptotics.hpp"
#include "elliptica/cli/table.hpp"
#include "elliptica/modulation.hpp"
#include "elliptica/solitons.hpp"
#include "elliptica/theta.hpp"
#include "elliptica/wave.hpp"

namespace elliptica::cli {
namespace {

using json = nlohmann::ordered_json;

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) f(i);
  };
  std::vector<std::thread> pool;
  const int extra = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(threads))) - 1;
  for (int k = 0; k < extra; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

std::string route_name(wave::Route r) { return r == wave::Route::direct_qmod ? "direct_qmod" : "dual_F"; }

std::string keyed(const std::string& key, double t) { return key + "[t=" + format_number(t) + "]"; }

// ---------------------------------------------------------------- profile

int cmd_profile(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Background bg(cfg.c);
  const std::vector<double> ts = cfg.times({100.0});
  const std::vector<double> xs = linear_samples(cfg.x_range.value_or(Range{-500.0, 390.0, 200}));

  struct Slot {
    std::optional<wave::WaveSample> sample;
    std::string note;
    bool domain = false;
  };
  std::vector<Slot> slots(ts.size() * xs.size());
  parallel_for(slots.size(), cfg.threads, [&](std::size_t i) {
    const double t = ts[i / xs.size()];
    const double x = xs[i % xs.size()];
    try {
      slots[i].sample = wave::q_el(x, t, bg);
    } catch (const Error& e) {
      slots[i].note = e.what();
      slots[i].domain = e.code() == Errc::out_of_domain;
    }
  });

  Table table;
  table.columns = {"x", "t", "xi", "d", "q_el", "route"};
  long long warnings = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Slot& s = slots[i];
    if (!s.sample) {
      const double t = ts[i / xs.size()];
      const double x = xs[i % xs.size()];
      if (!s.domain) {
        err << "error: profile row x=" << format_number(x) << " t=" << format_number(t) << ": " << s.note << '\n';
        return 1;
      }
      err << "warning: skipped x=" << format_number(x) << " t=" << format_number(t) << ": " << s.note << '\n';
      ++warnings;
      continue;
    }
    const wave::WaveSample& w = *s.sample;
    table.rows.push_back({w.x, w.t, w.xi, w.d, w.q, route_name(w.route)});
  }
  if (warnings) err << "warning: " << warnings << " rows skipped\n";
  if (cfg.format_or(Format::csv) == Format::json)
    write_json(table, out);
  else
    write_csv(table, out);
  return 0;
}

// ------------------------------------------------------------------ train

int cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Background bg(cfg.c);
  const int N = cfg.N;
  const std::vector<double> ts = cfg.times({1e4});
  const double threshold = solitons::interval_threshold(cfg.epsilon, N, bg);

  Table table;
  table.columns = {"t", "x", "v", "z", "part", "q_el", "train_sum", "abs_diff"};
  for (int n = 1; n <= N; ++n) table.columns.push_back("alpha_exact_" + std::to_string(n));
  for (int n = 1; n <= N; ++n) table.columns.push_back("alpha_asym_" + std::to_string(n));
  table.footer.push_back({"N", static_cast<long long>(N)});
  table.footer.push_back({"epsilon", cfg.epsilon});
  table.footer.push_back({"interval_threshold", threshold});

  for (double t : ts) {
    const solitons::TrainWindow w = solitons::train_window(N, cfg.epsilon, t, bg);
    if (t < threshold)
      err << "warning: t=" << format_number(t) << " is below the interval threshold T=" << format_number(threshold)
          << "; z-interval correspondence is not yet established there\n";

    const int P = cfg.points;
    struct Row {
      std::vector<Cell> cells;
      double diff_t = 0.0;
      double q_sqrt_t = 0.0;
      bool in_a = false;
      bool in_b = false;
      std::string error;
    };
    std::vector<Row> rows(P);
    parallel_for(rows.size(), cfg.threads, [&](std::size_t i) {
      const double x = w.a_lo + (w.b_hi - w.a_lo) * static_cast<double>(i) / P;
      Row& r = rows[i];
      try {
        const wave::WaveState s = wave::wave_state(x, t, bg);
        const double q = wave::q_el_dual(s, bg).q;
        const double sum = solitons::train_sum(s, N, bg);
        r.in_a = x >= w.a_lo && x <= w.a_hi;
        r.in_b = x >= w.b_lo && x < w.b_hi;
        const std::string part = r.in_a && r.in_b ? "AB" : (r.in_a ? "A" : "B");
        r.cells = {t, x, s.v, s.z, part, q, sum, std::abs(q - sum)};
        for (int n = 1; n <= N; ++n) r.cells.push_back(solitons::alpha_exact(s, n, bg));
        for (int n = 1; n <= N; ++n) r.cells.push_back(solitons::alpha_asymptotic_v(s.v, t, n, bg));
        r.diff_t = std::abs(q - sum) * t;
        r.q_sqrt_t = std::abs(q) * std::sqrt(t);
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    });
    double max_diff_t = 0.0;
    double max_q_sqrt_t = 0.0;
    for (auto& r : rows) {
      if (!r.error.empty()) {
        err << "error: train t=" << format_number(t) << ": " << r.error << '\n';
        return 1;
      }
      if (r.in_a) max_diff_t = std::max(max_diff_t, r.diff_t);
      if (r.in_b) max_q_sqrt_t = std::max(max_q_sqrt_t, r.q_sqrt_t);
      table.rows.push_back(std::move(r.cells));
    }
    table.footer.push_back({keyed("max_diff_times_t", t), max_diff_t});
    table.footer.push_back({keyed("max_abs_q_sqrt_t", t), max_q_sqrt_t});
  }
  if (cfg.format_or(Format::csv) == Format::json)
    write_json(table, out);
  else
    write_csv(table, out);
  return 0;
}

// ----------------------------------------------------------------- phases

json report_json(const solitons::MismatchReport& r, bool exact) {
  json j;
  j["m"] = r.m;
  j["alpha_limit"] = round15(r.alpha_limit);
  j["khruslov_simple"] = round15(r.khruslov_simple);
  j["khruslov_det"] = round15(r.khruslov_det);
  j["khruslov_det_exact"] = exact;
  j["mismatch"] = round15(r.mismatch);
  j["q_el_curve_limit"] = round15(r.q_el_limit);
  j["khruslov_prediction"] = round15(r.khruslov_prediction);
  j["convergence"] = json::array();
  for (const auto& row : r.rows) {
    json c;
    c["t"] = round15(row.t);
    c["x"] = round15(row.x);
    c["v"] = round15(row.v);
    c["q_el"] = round15(row.q_el);
    c["alpha_exact"] = round15(row.alpha_exact);
    c["error"] = round15(row.error);
    c["envelope"] = round15(row.envelope);
    c["ratio"] = round15(row.ratio);
    j["convergence"].push_back(std::move(c));
  }
  return j;
}

int cmd_phases(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Background bg(cfg.c);
  const std::vector<double> ts = cfg.times({1e4, 1e6, 1e8});
  std::vector<solitons::MismatchReport> reports;
  std::vector<bool> exact;
  for (int m : cfg.m) {
    reports.push_back(solitons::phase_mismatch_report(m, bg, cfg.h0, ts));
    exact.push_back(solitons::khruslov_phase(m, bg, cfg.h0).exact);
  }

  if (cfg.format_or(Format::json) == Format::csv) {
    Table table;
    table.columns = {"m", "t", "x", "v", "q_el", "alpha_exact", "error", "envelope", "ratio"};
    for (const auto& r : reports) {
      for (const auto& row : r.rows)
        table.rows.push_back({static_cast<long long>(r.m), row.t, row.x, row.v, row.q_el, row.alpha_exact, row.error,
                              row.envelope, row.ratio});
      const std::string m = "[m=" + std::to_string(r.m) + "]";
      table.footer.push_back({"alpha_limit" + m, r.alpha_limit});
      table.footer.push_back({"khruslov_simple" + m, r.khruslov_simple});
      table.footer.push_back({"khruslov_det" + m, r.khruslov_det});
      table.footer.push_back({"mismatch" + m, r.mismatch});
      table.footer.push_back({"q_el_curve_limit" + m, r.q_el_limit});
    }
    write_csv(table, out);
    return 0;
  }

  json doc;
  doc["c"] = round15(cfg.c);
  doc["h0"] = round15(cfg.h0);
  doc["reports"] = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) doc["reports"].push_back(report_json(reports[i], exact[i]));
  out << doc.dump(2) << '\n';
  return 0;
}

// ------------------------------------------------------------- expansions

int cmd_expansions(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Background bg(cfg.c);
  const std::vector<double> grid = asymptotics::default_grid();
  const std::vector<asymptotics::Expansion> cat = asymptotics::catalog(bg);
  std::vector<asymptotics::ScanResult> results(cat.size());
  parallel_for(cat.size(), cfg.threads, [&](std::size_t i) { results[i] = asymptotics::scan(cat[i], grid); });

  Table table;
  table.columns = {"expansion", "parameter", "value", "exact", "approx", "residual", "ratio", "note"};
  std::vector<std::string> failed;
  for (const auto& r : results) {
    for (const auto& row : r.rows)
      table.rows.push_back({r.name, std::string(asymptotics::to_string(r.parameter)), row.parameter, row.exact,
                            row.approx, row.residual, row.ratio, row.note});
    table.footer.push_back({"verdict[" + r.name + "]", std::string(r.pass ? "pass" : "fail")});
    if (!r.pass) failed.push_back(r.name);
  }
  table.footer.push_back({"passed", static_cast<long long>(results.size() - failed.size())});
  table.footer.push_back({"scans", static_cast<long long>(results.size())});
  if (cfg.format_or(Format::csv) == Format::json)
    write_json(table, out);
  else
    write_csv(table, out);
  if (!failed.empty()) {
    err << "error: expansion scans failed:";
    for (const auto& f : failed) err << ' ' << f;
    err << '\n';
    return 1;
  }
  return 0;
}

// -------------------------------------------------------------- selfcheck

std::complex<double> log_value(const theta::ThetaValue& v) { return v.log_scale + std::log(v.mantissa); }

double rel_dev_logs(std::complex<double> log_a, std::complex<double> log_b) {
  return std::abs(std::exp(log_a - log_b) - 1.0);
}

struct Tracker {
  CheckResult r;
  Tracker(std::string name, double threshold, const RunConfig& cfg) {
    r.name = std::move(name);
    r.threshold = cfg.tol.value_or(threshold);
  }
  void add(double dev) {
    ++r.identities;
    if (!(dev <= r.max_rel_dev)) r.max_rel_dev = std::isnan(dev) ? INFINITY : std::max(r.max_rel_dev, dev);
  }
  CheckResult done() {
    r.pass = r.note.empty() && r.identities > 0 && r.max_rel_dev <= r.threshold;
    return r;
  }
};

template <class F>
CheckResult run_check(const std::string& name, double threshold, const RunConfig& cfg, F&& body) {
  Tracker tr(name, threshold, cfg);
  try {
    body(tr);
  } catch (const std::exception& e) {
    tr.r.note = e.what();
  }
  return tr.done();
}

std::vector<std::complex<double>> random_points(int n) {
  std::mt19937_64 gen(0x5eed);
  std::uniform_real_distribution<double> re(-1.0, 1.0);
  std::uniform_real_distribution<double> im(-std::numbers::pi, std::numbers::pi);
  std::vector<std::complex<double>> zs;
  for (int i = 0; i < n; ++i) {
    const double a = re(gen);
    const double b = im(gen);
    zs.emplace_back(a, b);
  }
  return zs;
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const RunConfig& cfg) {
  const Background bg(cfg.c);
  const double c = bg.c;
  const double pi = std::numbers::pi;
  const std::vector<std::complex<double>> zs = random_points(20);
  const double taus[] = {-0.05, -1.0, -20.0};
  std::vector<CheckResult> out;

  out.push_back(run_check("theta_shift", 1e-10, cfg, [&](Tracker& tr) {
    for (double tau : taus)
      for (auto z : zs) {
        const auto base = log_value(theta::theta_auto({z, tau}));
        for (int n = -2; n <= 2; ++n)
          for (int l = -2; l <= 2; ++l) {
            const std::complex<double> shifted = z + std::complex<double>(0.0, 2.0 * pi * n) + tau * l;
            const std::complex<double> factor = -0.5 * tau * l * l - z * static_cast<double>(l);
            tr.add(rel_dev_logs(log_value(theta::theta_auto({shifted, tau})), base + factor));
          }
      }
  }));

  out.push_back(run_check("poisson_duality", 1e-10, cfg, [&](Tracker& tr) {
    const double grid_tau[] = {-20.0, -1.0, -0.01};
    const std::complex<double> grid_z[] = {{0.0, 0.0}, {0.5, 0.0}, {-1.2, 0.0}, {0.3, 0.2}, {0.0, 0.1}};
    for (double tau : grid_tau)
      for (auto z : grid_z)
        tr.add(rel_dev_logs(log_value(theta::theta_direct({z, tau})), log_value(theta::theta_dual({z, tau}))));
  }));

  out.push_back(run_check("theta_even_positive", 1e-12, cfg, [&](Tracker& tr) {
    for (double tau : taus) {
      for (auto z : zs) tr.add(rel_dev_logs(log_value(theta::theta_auto({-z, tau})), log_value(theta::theta_auto({z, tau}))));
      for (double x = -3.0; x <= 3.0; x += 0.5) {
        const theta::ThetaValue v = theta::theta_auto({x, tau});
        // A non-positive real value counts as a full failure.
        const bool positive = v.mantissa.real() > 0.0 && std::abs(v.mantissa.imag()) <= 1e-12 * v.mantissa.real();
        tr.add(positive ? std::abs(v.mantissa.imag()) / v.mantissa.real() : INFINITY);
      }
    }
  }));

  out.push_back(run_check("theta_ratio", 1e-9, cfg, [&](Tracker& tr) {
    for (int i = 1; i <= 9; ++i) {
      const double d = 0.1 * i * c;
      const double tau = abelian::periods(d, bg).tau;
      const std::complex<double> r =
          theta::ratio(theta::theta_auto({0.0, tau}), theta::theta_auto({{0.0, pi}, tau}));
      const double expect = std::sqrt((c + d) / (c - d));
      tr.add(std::abs(r - expect) / expect);
    }
  }));

  out.push_back(run_check("route_agreement", 1e-8, cfg, [&](Tracker& tr) {
    const double xis[] = {-0.4, -0.25, -0.1, 0.0, 0.1, 0.2};
    const double times[] = {5.0, 20.0, 50.0, 200.0};
    for (double xi : xis)
      for (double t : times) {
        const wave::WaveState s = wave::wave_state(12.0 * t * xi * c * c, t, bg);
        double direct;
        try {
          direct = wave::q_el_direct(s, bg).q;
        } catch (const Error& e) {
          if (e.code() == Errc::slow_convergence) continue;
          throw;
        }
        tr.add(std::abs(direct - wave::q_el_dual(s, bg).q) / c);
      }
  }));

  out.push_back(run_check("agm_vs_quadrature", 1e-10, cfg, [&](Tracker& tr) {
    std::vector<double> ks;
    for (int i = 1; i <= 9; ++i) ks.push_back(0.1 * i);
    ks.push_back(0.99);
    for (double k : ks) {
      const abelian::PeriodData p = abelian::periods(k * c, bg);
      tr.add(std::abs(abelian::I0_quadrature(k * c, bg) - p.I0) / std::max(1.0, std::abs(p.I0)));
      tr.add(std::abs(abelian::I1_quadrature(k * c, bg) - p.I1) / std::max(1.0, std::abs(p.I1)));
    }
  }));

  out.push_back(run_check("mu2_routes", 1e-10, cfg, [&](Tracker& tr) {
    for (int i = 1; i <= 9; ++i) {
      const double d = 0.1 * i * c;
      const double a = modulation::mu_squared(d, bg);
      tr.add(std::abs(a - modulation::mu_squared_moments(d, bg)) / (c * c));
      tr.add(std::abs(a - modulation::mu_squared_at(modulation::BranchPoint::from_d(d, bg), bg).value) / (c * c));
    }
  }));

  out.push_back(run_check("lambert_vs_bisection", 1e-8, cfg, [&](Tracker& tr) {
    tr.add(std::abs(modulation::eta_of_v_lambert(1e-6) - modulation::eta_of_v(1e-6, bg)));
  }));
  return out;
}

namespace {

int cmd_selfcheck(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<CheckResult> checks = run_selfcheck(cfg);
  long long identities = 0;
  double worst = 0.0;
  std::vector<std::string> failed;
  for (const auto& ch : checks) {
    out << "check " << ch.name << ": identities=" << ch.identities << " max_rel_dev=" << format_number(ch.max_rel_dev)
        << " threshold=" << format_number(ch.threshold) << ' ' << (ch.pass ? "PASS" : "FAIL");
    if (!ch.note.empty()) out << " (" << ch.note << ')';
    out << '\n';
    identities += ch.identities;
    worst = std::max(worst, ch.max_rel_dev);
    if (!ch.pass) failed.push_back(ch.name);
  }
  out << "selfcheck: " << checks.size() - failed.size() << '/' << checks.size()
      << " checks passed, identities run=" << identities << ", max relative deviation=" << format_number(worst) << '\n';
  if (!failed.empty()) {
    err << "error: failing checks:";
    for (const auto& f : failed) err << ' ' << f;
    err << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  int code = 1;
  try {
    switch (cfg.command) {
      case Command::profile: code = cmd_profile(cfg, buffer, err); break;
      case Command::train: code = cmd_train(cfg, buffer, err); break;
      case Command::phases: code = cmd_phases(cfg, buffer, err); break;
      case Command::expansions: code = cmd_expansions(cfg, buffer, err); break;
      case Command::selfcheck: code = cmd_selfcheck(cfg, buffer, err); break;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (cfg.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    file << buffer.str();
    if (!file) {
      err << "error: cannot write " << cfg.out << '\n';
      return 1;
    }
  }
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int code = 0;
  const std::optional<RunConfig> cfg = parse_args(argc, argv, out, err, code);
  if (!cfg) return code;
  return run(*cfg, out, err);
}

}  // namespace elliptica::cli
