#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "elliptica/background.hpp"

namespace elliptica::asymptotics {

enum class Parameter { eta, v };

/// One printed expansion: exact evaluator, truncation, and its O-term with
/// unit constant.
struct Expansion {
  std::string name;
  Parameter parameter = Parameter::eta;
  std::function<double(double)> exact;
  std::function<double(double)> approx;
  std::function<double(double)> envelope;
};

struct ResidualRow {
  double parameter = 0.0;
  double exact = 0.0;
  double approx = 0.0;
  double residual = 0.0;
  double ratio = 0.0;
  bool failed = false;
  std::string note;
};

struct ScanResult {
  std::string name;
  Parameter parameter = Parameter::eta;
  std::vector<ResidualRow> rows;
  bool pass = false;
};

/// Bounded means: no failed rows, every ratio finite, and either every ratio
/// is at most 10 or the ratio at the last grid point is at most 3 times the
/// ratio at the first.
bool bounded(std::span<const ResidualRow> rows);

/// Evaluates the expansion on a decreasing grid. A throwing evaluation flags
/// its row and the scan continues.
ScanResult scan(const Expansion& e, std::span<const double> grid);

/// Half-decade grid 1e-2, 10^-2.5, ..., 1e-5.
std::vector<double> default_grid();

/// The twelve appendix expansions, in the order I2, I1, I3, I4, tau_star,
/// amplitude, mu2, v, eta_of_v, Delta, Bg, z.
std::vector<Expansion> catalog(const Background& bg);

/// I0 = pi/(2c) + O(eta); kept outside the catalog.
Expansion i0_expansion(const Background& bg);

std::string_view to_string(Parameter p) noexcept;

}  // namespace elliptica::asymptotics
