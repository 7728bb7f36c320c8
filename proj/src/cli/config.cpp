#include "elliptica/cli/config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

namespace elliptica::cli {
namespace {

// "LO,HI,N" with N >= 1 and LO <= HI (LO == HI only for N == 1).
Range parse_range(const std::vector<double>& v, const std::string& flag) {
  if (v.size() != 3) throw CLI::ValidationError(flag, "expects LO,HI,N");
  Range r{v[0], v[1], static_cast<int>(v[2])};
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || v[2] != std::floor(v[2]) || r.points < 1)
    throw CLI::ValidationError(flag, "needs finite bounds and an integer point count >= 1");
  if (r.lo > r.hi || (r.lo == r.hi && r.points > 1)) throw CLI::ValidationError(flag, "range is empty");
  return r;
}

}  // namespace

std::vector<double> RunConfig::times(const std::vector<double>& fallback) const {
  if (!t_values.empty()) return t_values;
  if (t_range) return log_samples(*t_range);
  return fallback;
}

std::vector<double> linear_samples(const Range& r) {
  std::vector<double> out;
  if (r.points == 1) return {r.lo};
  for (int i = 0; i < r.points; ++i) out.push_back(r.lo + (r.hi - r.lo) * i / (r.points - 1));
  return out;
}

std::vector<double> log_samples(const Range& r) {
  if (r.points == 1) return {r.lo};
  std::vector<double> out;
  const double a = std::log(r.lo);
  const double b = std::log(r.hi);
  for (int i = 0; i < r.points; ++i) out.push_back(std::exp(a + (b - a) * i / (r.points - 1)));
  out.front() = r.lo;
  out.back() = r.hi;
  return out;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code) {
  CLI::App app{
      "Modulated elliptic wave of the step-like MKdV problem near the leading edge x = 4c^2 t.\n"
      "Defaults: c = 1, h0 = 1, epsilon = 0.05, N = 2."};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::vector<double> t_range;
  std::vector<double> x_range;
  std::string format;

  app.add_option("--c", cfg.c, "step height c > 0")->capture_default_str();
  app.add_option("--h0", cfg.h0, "scattering constant h0 != 0 (Khruslov phases)")->capture_default_str();
  app.add_option("--t", cfg.t_values, "time values, comma separated")->delimiter(',');
  app.add_option("--t-range", t_range, "LO,HI,N log-spaced times")->delimiter(',')->expected(3);
  app.add_option("--x-range", x_range, "LO,HI,N linear x grid (profile)")->delimiter(',')->expected(3);
  app.add_option("--N", cfg.N, "soliton count of the train window")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "window margin, 0 < epsilon < 1/4")->capture_default_str();
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--tol", cfg.tol, "override every selfcheck threshold");
  app.add_option("--threads", cfg.threads, "worker threads for row evaluation")
      ->envname("ELLIPTICA_THREADS")
      ->capture_default_str();
  app.add_option("--m", cfg.m, "soliton indices for phases, comma separated")->delimiter(',');
  app.add_option("--points", cfg.points, "x samples per train window")->capture_default_str();

  auto* profile = app.add_subcommand("profile", "q_el over an (x, t) grid [csv: x,t,xi,d,q_el,route]");
  auto* train = app.add_subcommand("train", "q_el against the soliton train on the log window");
  auto* phases = app.add_subcommand("phases", "phase comparison along the soliton peak curve [json]");
  auto* expansions = app.add_subcommand("expansions", "residual scans of the small-eta expansions");
  auto* selfcheck = app.add_subcommand("selfcheck", "identity and cross-route checks; exit 0 iff all pass");

  try {
    app.parse(argc, argv);
    if (!t_range.empty()) cfg.t_range = parse_range(t_range, "--t-range");
    if (!x_range.empty()) cfg.x_range = parse_range(x_range, "--x-range");
    if (!format.empty()) cfg.format = format == "json" ? Format::json : Format::csv;
    if (!(cfg.c > 0.0) || !std::isfinite(cfg.c)) throw CLI::ValidationError("--c", "must be positive");
    if (!(cfg.h0 != 0.0) || !std::isfinite(cfg.h0)) throw CLI::ValidationError("--h0", "InvalidH0: must be nonzero");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.25)) throw CLI::ValidationError("--epsilon", "must lie in (0, 1/4)");
    if (cfg.N < 1) throw CLI::ValidationError("--N", "must be >= 1");
    if (cfg.threads < 1) throw CLI::ValidationError("--threads", "must be >= 1");
    if (cfg.points < 2) throw CLI::ValidationError("--points", "must be >= 2");
    if (cfg.tol && !(*cfg.tol > 0.0)) throw CLI::ValidationError("--tol", "must be positive");
    for (double t : cfg.t_values)
      if (!(t > 0.0) || !std::isfinite(t)) throw CLI::ValidationError("--t", "times must be positive");
    if (cfg.t_range && !(cfg.t_range->lo > 0.0)) throw CLI::ValidationError("--t-range", "times must be positive");
    for (int m : cfg.m)
      if (m < 1) throw CLI::ValidationError("--m", "indices must be >= 1");
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err);
    if (exit_code != 0) exit_code = 2;
    return std::nullopt;
  }

  if (profile->parsed()) cfg.command = Command::profile;
  if (train->parsed()) cfg.command = Command::train;
  if (phases->parsed()) cfg.command = Command::phases;
  if (expansions->parsed()) cfg.command = Command::expansions;
  if (selfcheck->parsed()) cfg.command = Command::selfcheck;
  exit_code = 0;
  return cfg;
}

}  // namespace elliptica::cli
