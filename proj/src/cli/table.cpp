#include "elliptica/cli/table.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>

namespace elliptica::cli {
namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

// Quotes a CSV field only when it needs it.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return round15(*d);
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

double round15(double x) {
  if (!std::isfinite(x)) return x;
  const std::string s = format_number(x);
  double r = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), r);
  return r;
}

void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(row[i]));
    out << '\n';
  }
  for (const auto& [k, v] : t.footer) out << "# " << k << '=' << cell_text(v) << '\n';
}

void write_json(const Table& t, std::ostream& out) {
  nlohmann::ordered_json j;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    j["rows"].push_back(std::move(r));
  }
  j["footer"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.footer) j["footer"][k] = cell_json(v);
  out << j.dump(2) << '\n';
}

}  // namespace elliptica::cli
