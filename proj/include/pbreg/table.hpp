#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pbreg {

// A report table of preformatted string cells, with '#'-prefixed header notes.
struct Table {
  std::vector<std::string> notes;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);

  void write_csv(std::ostream& out) const;
  void write_markdown(std::ostream& out) const;
  void write_json(std::ostream& out) const;

  /// Inverse of write_csv (notes included).
  static Table read_csv(std::istream& in);

  bool operator==(const Table&) const = default;
};

/// Shortest round-trip-stable rendering with at most `digits` significant digits.
std::string format_number(double value, int digits = 6);

std::vector<std::string> split_list(const std::string& text, char sep = ',');

}  // namespace pbreg
