#include "choinet/report.hpp"

#include <cmath>

#include <fmt/format.h>
#include <fmt/printf.h>

#include "choinet/errors.hpp"
#include "json.hpp"

namespace choinet {
namespace {

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<bool>(c) ? "true" : "false";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw InvalidArgument(fmt::format("Table: row has {} cells for {} columns", row.size(), columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  return fmt::sprintf("%.12g", x);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_field(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_field(cell_text(row[c]));
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  // Numbers are emitted from their 12-digit text so both formats agree.
  std::string out = "[";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += r ? ",\n  {" : "\n  {";
    const auto& row = table.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ", ";
      out += nlohmann::json(table.columns[c]).dump() + ": ";
      const Cell& cell = row[c];
      if (const auto* s = std::get_if<std::string>(&cell)) {
        out += nlohmann::json(*s).dump();
      } else if (const auto* d = std::get_if<double>(&cell)) {
        out += std::isfinite(*d) ? format_number(*d) : nlohmann::json(format_number(*d)).dump();
      } else {
        out += cell_text(cell);
      }
    }
    out += "}";
  }
  out += table.rows.empty() ? "]\n" : "\n]\n";
  return out;
}

std::string render(const Table& table, OutputFormat format) {
  return format == OutputFormat::Csv ? to_csv(table) : to_json(table);
}

}  // namespace choinet
