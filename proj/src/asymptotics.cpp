#include "elliptica/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "elliptica/abelian.hpp"
#include "elliptica/modulation.hpp"
#include "elliptica/wave.hpp"

namespace elliptica::asymptotics {
namespace {

using modulation::BranchPoint;

abelian::PeriodData at_eta(double eta, const Background& bg) {
  return abelian::periods(BranchPoint::from_eta(eta, bg), bg);
}

double log_inv(double x) { return -std::log(x); }

// z is checked at the t that puts 8 c^3 t v / log(1/v) at 3/2, mid-soliton.
double z_time(double v, const Background& bg) {
  const double c = bg.c;
  return 1.5 * log_inv(v) / (8.0 * c * c * c * v);
}

}  // namespace

std::string_view to_string(Parameter p) noexcept { return p == Parameter::eta ? "eta" : "v"; }

bool bounded(std::span<const ResidualRow> rows) {
  if (rows.empty()) return false;
  bool all_small = true;
  for (const auto& r : rows) {
    if (r.failed || !std::isfinite(r.ratio)) return false;
    if (r.ratio > 10.0) all_small = false;
  }
  return all_small || rows.back().ratio <= 3.0 * rows.front().ratio;
}

ScanResult scan(const Expansion& e, std::span<const double> grid) {
  ScanResult out;
  out.name = e.name;
  out.parameter = e.parameter;
  for (double p : grid) {
    ResidualRow row;
    row.parameter = p;
    try {
      row.exact = e.exact(p);
      row.approx = e.approx(p);
      row.residual = std::abs(row.exact - row.approx);
      row.ratio = row.residual / e.envelope(p);
      if (!std::isfinite(row.ratio)) {
        row.failed = true;
        row.note = "non-finite ratio";
      }
    } catch (const std::exception& ex) {
      row.failed = true;
      row.note = ex.what();
    }
    out.rows.push_back(std::move(row));
  }
  out.pass = bounded(out.rows);
  return out;
}

std::vector<double> default_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 6; ++i) g.push_back(std::pow(10.0, -2.0 - 0.5 * i));
  return g;
}

std::vector<Expansion> catalog(const Background& bg) {
  const double c = bg.c;
  const double c3 = c * c * c;
  const double pi = std::numbers::pi;
  const double ln2 = std::numbers::ln2;
  const double log8 = 3.0 * ln2;
  const double log8e = log8 + 1.0;
  std::vector<Expansion> out;

  out.push_back({"I2", Parameter::eta, [=](double eta) { return at_eta(eta, bg).I2; },
                 [=](double eta) { return -pi / (4.0 * c) * std::log(2.0 * eta); },
                 [=](double eta) { return eta * log_inv(eta) / c; }});
  out.push_back({"I1", Parameter::eta, [=](double eta) { return at_eta(eta, bg).I1; },
                 [=](double eta) { return (log8 - std::log(eta)) / (2.0 * c); },
                 [=](double eta) { return eta * log_inv(eta) / c; }});
  out.push_back({"I3", Parameter::eta, [=](double eta) { return at_eta(eta, bg).I3; },
                 [=](double eta) { return c - 0.5 * c * eta * (log8e - std::log(eta)); },
                 [=](double eta) { return c * eta * eta * log_inv(eta); }});
  out.push_back({"I4", Parameter::eta, [=](double eta) { return at_eta(eta, bg).I4; },
                 [=](double eta) { return c3 * (2.0 / 3.0 - 3.0 * eta); },
                 [=](double eta) { return c3 * eta * eta * log_inv(eta); }});
  out.push_back({"tau_star", Parameter::eta,
                 [=](double eta) { return abelian::tau_star_at(BranchPoint::from_eta(eta, bg), bg); },
                 [=](double eta) { return -4.0 * (log8 - std::log(eta)); }, [](double eta) { return eta; }});
  out.push_back({"amplitude", Parameter::eta,
                 [=](double eta) {
                   const BranchPoint p = BranchPoint::from_eta(eta, bg);
                   return c * std::sqrt(p.kp2()) * std::exp(-0.125 * abelian::tau_star_at(p, bg));
                 },
                 [=](double) { return 4.0 * c; },
                 [=](double eta) {
                   return 4.0 * c * std::exp(0.25 * abelian::tau_star_at(BranchPoint::from_eta(eta, bg), bg));
                 }});
  out.push_back({"mu2", Parameter::eta,
                 [=](double eta) { return modulation::mu_squared_at(BranchPoint::from_eta(eta, bg), bg).value; },
                 [=](double eta) { return c * c * (1.0 / 3.0 - eta * (log8 - std::log(eta) - 2.0) / 3.0); },
                 [=](double eta) { return c * c * eta * eta * log_inv(eta) * log_inv(eta); }});
  out.push_back({"v", Parameter::eta, [=](double eta) { return modulation::v_of_eta(eta, bg); },
                 [](double eta) { return modulation::v_of_eta_asymptotic(eta); },
                 [](double eta) { return eta * eta * log_inv(eta) * log_inv(eta); }});
  out.push_back({"eta_of_v", Parameter::v, [=](double v) { return modulation::eta_of_v(v, bg); },
                 [](double v) { return modulation::eta_of_v_asymptotic(v); },
                 [](double v) {
                   const double L = log_inv(v);
                   const double lL = std::log(L);
                   return v / L * lL * lL / (L * L);
                 }});
  out.push_back({"Delta", Parameter::eta, [=](double eta) { return at_eta(eta, bg).delta / pi; },
                 [=](double eta) { return -0.5 * (1.0 - 4.0 * ln2 / log_inv(eta)); },
                 [](double eta) { return 1.0 / (log_inv(eta) * log_inv(eta)); }});
  out.push_back({"Bg", Parameter::eta, [=](double eta) { return at_eta(eta, bg).Bg; },
                 [=](double eta) { return 8.0 * pi * c3 * eta; },
                 [=](double eta) { return c3 * eta * eta * log_inv(eta); }});
  out.push_back({"z", Parameter::v, [=](double v) { return wave::wave_state_v(v, z_time(v, bg), bg).z; },
                 [=](double v) { return wave::z_leading_edge(z_time(v, bg), v, bg); },
                 [=](double v) {
                   const double L = log_inv(v);
                   const double t = z_time(v, bg);
                   return 1.0 / L + t * v * std::log(L) / (L * L);
                 }});
  return out;
}

Expansion i0_expansion(const Background& bg) {
  const double c = bg.c;
  return {"I0", Parameter::eta, [=](double eta) { return at_eta(eta, bg).I0; },
          [=](double) { return std::numbers::pi / (2.0 * c); }, [=](double eta) { return eta / c; }};
}

}  // namespace elliptica::asymptotics
