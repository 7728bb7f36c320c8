#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace elliptica::cli {

enum class Command { profile, train, phases, expansions, selfcheck };
enum class Format { csv, json };

/// LO..HI with POINTS samples; t ranges are log-spaced, x ranges linear.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int points = 1;
};

struct RunConfig {
  Command command = Command::selfcheck;
  double c = 1.0;
  double h0 = 1.0;
  std::vector<double> t_values;
  std::optional<Range> t_range;
  std::optional<Range> x_range;
  int N = 2;
  double epsilon = 0.05;
  std::optional<Format> format;
  std::string out;
  std::optional<double> tol;
  int threads = 1;
  std::vector<int> m = {1};
  int points = 400;

  /// Explicit --t values, else the --t-range samples, else the fallback.
  std::vector<double> times(const std::vector<double>& fallback) const;
  Format format_or(Format fallback) const { return format.value_or(fallback); }
};

/// Expands a range into its sample points.
std::vector<double> linear_samples(const Range& r);
std::vector<double> log_samples(const Range& r);

/// Parses argv. On --help or a usage error the message is written and the
/// exit code is returned through `exit_code` with no config.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code);

}  // namespace elliptica::cli
