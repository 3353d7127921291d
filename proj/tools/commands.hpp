#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pbreg/table.hpp"

namespace pbreg::cli {

enum class OutputFormat { Csv, Markdown, Json };

struct RunConfig {
  std::string command;
  std::string input;
  std::string response;
  std::vector<std::string> mean_cols;
  std::vector<std::string> precision_cols;
  double alpha = 0.05;
  int B = 1000;
  int R = 1000;
  std::vector<int> n;
  std::vector<std::string> scenarios;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  bool bands = false;
  std::string out;
  OutputFormat format = OutputFormat::Csv;
};

enum ExitCode : int { kOk = 0, kInputError = 2, kFitError = 3, kBootstrapError = 4 };

// A named report; `name` becomes the file stem under --out.
struct Report {
  std::string name;
  Table table;
};

std::vector<Report> cmd_fit(const RunConfig& config);
std::vector<Report> cmd_compare(const RunConfig& config);
std::vector<Report> cmd_bootstrap(const RunConfig& config);
std::vector<Report> cmd_simulate(const RunConfig& config);
std::vector<Report> cmd_diagnose(const RunConfig& config);

/// Parses argv-style arguments (without the program name) and runs the
/// command. Reports go to --out when given, else to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbreg::cli
