#include "pbreg/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "pbreg/errors.hpp"

namespace pbreg {
namespace {

std::string quote_csv(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (const char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j) out << ',';
    out << quote_csv(row[j]);
  }
  out << '\n';
}

nlohmann::json json_cell(const std::string& cell) {
  if (cell.empty() || cell == "-" || cell == "NA") return nullptr;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end && *end == '\0' && std::isfinite(v)) return v;
  return cell;
}

}  // namespace

void Table::add_row(std::vector<std::string> row) {
  if (!header.empty() && row.size() != header.size()) {
    throw ArgumentError("table row width does not match the header");
  }
  rows.push_back(std::move(row));
}

void Table::write_csv(std::ostream& out) const {
  for (const auto& note : notes) out << "# " << note << '\n';
  write_csv_row(out, header);
  for (const auto& row : rows) write_csv_row(out, row);
}

void Table::write_markdown(std::ostream& out) const {
  for (const auto& note : notes) out << "# " << note << '\n';
  if (!notes.empty()) out << '\n';
  std::vector<std::size_t> width(header.size(), 3);
  for (std::size_t j = 0; j < header.size(); ++j) width[j] = std::max(width[j], header[j].size());
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    out << '|';
    for (std::size_t j = 0; j < cells.size(); ++j) {
      out << ' ' << cells[j] << std::string(width[j] - cells[j].size(), ' ') << " |";
    }
    out << '\n';
  };
  line(header);
  out << '|';
  for (const std::size_t w : width) out << std::string(w + 2, '-') << '|';
  out << '\n';
  for (const auto& row : rows) line(row);
}

void Table::write_json(std::ostream& out) const {
  nlohmann::json doc;
  doc["notes"] = notes;
  doc["columns"] = header;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t j = 0; j < row.size(); ++j) obj[header[j]] = json_cell(row[j]);
    doc["rows"].push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

Table Table::read_csv(std::istream& in) {
  Table table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header && line.rfind("# ", 0) == 0) {
      table.notes.push_back(line.substr(2));
      continue;
    }
    if (!have_header) {
      table.header = parse_csv_line(line);
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    table.add_row(parse_csv_line(line));
  }
  return table;
}

std::string format_number(double value, int digits) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

}  // namespace pbreg
