#pragma once

// Column tables and their CSV / JSON renderings. Numbers use 12 significant
// digits (%.12g) in both formats so outputs diff cleanly.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace choinet {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws InvalidArgument if the row width does not match the columns.
  void add_row(std::vector<Cell> row);
};

enum class OutputFormat { Csv, Json };

std::string format_number(double x);

/// RFC 4180 style: header line, one line per row, quoting fields that contain
/// commas, quotes or newlines.
std::string to_csv(const Table& table);

/// Array of row objects keyed by column name.
std::string to_json(const Table& table);

std::string render(const Table& table, OutputFormat format);

}  // namespace choinet
