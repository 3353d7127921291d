#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "pbreg/betareg.hpp"

namespace pbreg {

inline constexpr const char* kInterceptName = "(Intercept)";

// Numeric columns read from a headered CSV file.
struct CsvFrame {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;

  /// Column by name; InputError naming the column when absent.
  [[nodiscard]] Eigen::VectorXd column(const std::string& name) const;
};

/// Parses comma-separated numeric data with a header row. Throws InputError on
/// ragged rows or non-numeric cells (reporting line and column).
CsvFrame read_csv(std::istream& in);
CsvFrame read_csv_file(const std::string& path);

// Response plus mean- and precision-model designs with named columns.
struct Dataset {
  std::string response_name;
  Eigen::VectorXd y;
  RegressionSpec spec;
};

/// Builds a dataset from named columns; both designs get a leading intercept.
Dataset make_dataset(const CsvFrame& frame, const std::string& response,
                     const std::vector<std::string>& mean_columns,
                     const std::vector<std::string>& precision_columns);

}  // namespace pbreg
