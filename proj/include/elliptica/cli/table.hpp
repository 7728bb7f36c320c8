#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace elliptica::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> footer;
};

/// Shortest form at 15 significant digits, '.' separator, independent of locale.
std::string format_number(double x);
/// x rounded to 15 significant digits.
double round15(double x);

/// Header row, data rows, then footer lines as "# key=value". LF endings.
void write_csv(const Table& t, std::ostream& out);
/// {"columns": [...], "rows": [[...], ...], "footer": {...}}
void write_json(const Table& t, std::ostream& out);

}  // namespace elliptica::cli
