#include "pbreg/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pbreg/errors.hpp"
#include "pbreg/table.hpp"

namespace pbreg {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\"");
  return s.substr(first, last - first + 1);
}

}  // namespace

Eigen::VectorXd CsvFrame::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InputError("column '" + name + "' not found in input");
  return values.col(static_cast<Eigen::Index>(it - columns.begin()));
}

CsvFrame read_csv(std::istream& in) {
  CsvFrame frame;
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (frame.columns.empty()) {
      frame.columns = cells;
      continue;
    }
    if (cells.size() != frame.columns.size()) {
      throw InputError("line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                       " fields, header has " + std::to_string(frame.columns.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cells[j].c_str(), &end);
      if (cells[j].empty() || end == nullptr || *end != '\0' || errno == ERANGE) {
        throw InputError("line " + std::to_string(line_no) + ", column '" + frame.columns[j] +
                         "': not a number: '" + cells[j] + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (frame.columns.empty()) throw InputError("input has no header row");
  frame.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(frame.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      frame.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return frame;
}

CsvFrame read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  return read_csv(in);
}

Dataset make_dataset(const CsvFrame& frame, const std::string& response,
                     const std::vector<std::string>& mean_columns,
                     const std::vector<std::string>& precision_columns) {
  Dataset data;
  data.response_name = response;
  data.y = frame.column(response);
  const Eigen::Index n = frame.values.rows();
  auto design = [&](const std::vector<std::string>& names, std::vector<std::string>& labels) {
    Eigen::MatrixXd m(n, static_cast<Eigen::Index>(names.size()) + 1);
    m.col(0).setOnes();
    labels = {kInterceptName};
    for (std::size_t j = 0; j < names.size(); ++j) {
      m.col(static_cast<Eigen::Index>(j) + 1) = frame.column(names[j]);
      labels.push_back(names[j]);
    }
    return m;
  };
  data.spec.X = design(mean_columns, data.spec.mean_names);
  data.spec.Z = design(precision_columns, data.spec.precision_names);
  return data;
}

}  // namespace pbreg
