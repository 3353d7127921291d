#include <catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "pbreg/simlab.hpp"
#include "pbreg/table.hpp"

namespace fs = std::filesystem;
using namespace pbreg;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// S1 sample written as CSV with columns x1, x2, y.
fs::path sample_csv() {
  const fs::path path = fs::temp_directory_path() / "pbreg_cli_sample.csv";
  const Dataset d = gen_scenario(ScenarioId::S1, 120, 31);
  std::ofstream f(path);
  f.precision(17);
  f << "x1,x2,y\n";
  for (Eigen::Index i = 0; i < d.y.size(); ++i) f << d.spec.X(i, 1) << ',' << d.spec.X(i, 2) << ',' << d.y(i) << '\n';
  return path;
}

std::vector<std::string> data_args(const std::string& command) {
  return {command, "--input", sample_csv().string(), "--response", "y", "--mean-cols", "x1,x2",
          "--precision-cols", "x1"};
}

Table parse(const std::string& csv) {
  std::istringstream in(csv);
  return Table::read_csv(in);
}

}  // namespace

TEST_CASE("fit prints a coefficient table and is deterministic") {
  const CliRun a = run(data_args("fit"));
  REQUIRE(a.code == 0);
  const Table t = parse(a.out);
  CHECK(t.header == std::vector<std::string>{"component", "term", "estimate", "std.error", "statistic", "p.value"});
  CHECK(t.rows.size() == 3 + 2 + 2);
  CHECK(t.rows[1][1] == "x1");
  CHECK(t.rows[3][0] == "precision");
  CHECK(t.rows[5][1] == "pseudo.R2");
  CHECK(a.out.find("# seed: none") != std::string::npos);
  CHECK(a.out.find("# pbreg ") != std::string::npos);
  CHECK(run(data_args("fit")).out == a.out);
}

TEST_CASE("missing column exits with code 2 and names it") {
  auto args = data_args("fit");
  args[6] = "x1,nope";
  const CliRun r = run(args);
  CHECK(r.code == 2);
  CHECK(r.err.find("nope") != std::string::npos);
}

TEST_CASE("unknown option and missing input are input errors") {
  CHECK(run({"fit", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  auto args = data_args("fit");
  args[2] = "/nonexistent/path.csv";
  CHECK(run(args).code == 2);
}

TEST_CASE("non-converging fit exits with code 3") {
  const fs::path path = fs::temp_directory_path() / "pbreg_cli_constant.csv";
  {
    std::ofstream f(path);
    f << "x,y\n1,5\n2,5\n3,5\n4,5\n5,5\n";
  }
  const CliRun r = run({"fit", "--input", path.string(), "--response", "y", "--mean-cols", "x"});
  CHECK(r.code == 3);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("compare reports four methods") {
  const CliRun r = run(data_args("compare"));
  REQUIRE(r.code == 0);
  const Table t = parse(r.out);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[0][0] == "OLS");
  CHECK(t.rows[1][0] == "Log-OLS(Duan)");
  CHECK(t.rows[2][0] == "WLS");
  CHECK(t.rows[3][0] == "CDF-beta");
  CHECK(t.header == std::vector<std::string>{"method", "RMSE", "Cov80", "Cov95"});
}

TEST_CASE("diagnose reports BP, VIF and PIT") {
  const CliRun r = run(data_args("diagnose"));
  REQUIRE(r.code == 0);
  const Table t = parse(r.out);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[0][0] == "breusch_pagan");
  CHECK(t.rows[1][1] == "x1");
  CHECK(std::stod(t.rows[1][2]) < 1.1);
  CHECK(t.rows[3][0] == "pit_ks");
}

TEST_CASE("bootstrap is reproducible and requires a seed") {
  auto args = data_args("bootstrap");
  CHECK(run(args).code == 2);
  args.insert(args.end(), {"--seed", "11", "--B", "50"});
  const CliRun a = run(args);
  REQUIRE(a.code == 0);
  CHECK(run(args).out == a.out);
  CHECK(a.out.find("# seed: 11") != std::string::npos);
  const Table t = parse(a.out);
  REQUIRE(t.rows.size() == 5);
  int ordered = 0;
  for (const auto& row : t.rows) ordered += std::stod(row[4]) <= std::stod(row[2]);
  CHECK(ordered >= 5);

  args.back() = "2";
  CHECK(run(args).code == 0);
}

TEST_CASE("simulate writes one table per scenario") {
  const fs::path dir = fs::temp_directory_path() / "pbreg_cli_sim";
  fs::remove_all(dir);
  const CliRun r = run({"simulate", "--seed", "5", "--R", "5", "--n", "25", "--scenarios", "S1,S3", "--out",
                        dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "simulate_S1.csv"));
  CHECK(fs::exists(dir / "simulate_S1.md"));
  CHECK(fs::exists(dir / "simulate_S3.csv"));
  std::ifstream f(dir / "simulate_S1.csv");
  const Table t = Table::read_csv(f);
  CHECK(t.header == std::vector<std::string>{"n", "Metric", "Recip", "Log", "OLS", "GLS", "WLS", "Beta"});
  CHECK(t.rows[3][2] == "-");
  CHECK(t.rows[4][3] == "-");

  const CliRun again = run({"simulate", "--seed", "5", "--R", "5", "--n", "25", "--scenarios", "S1"});
  std::stringstream file;
  file << std::ifstream(dir / "simulate_S1.csv").rdbuf();
  CHECK(again.out.find(file.str().substr(file.str().find("n,Metric"))) != std::string::npos);

  CHECK(run({"simulate", "--seed", "5", "--scenarios", "S9"}).code == 2);
  CHECK(run({"simulate", "--R", "5"}).code == 2);
}

TEST_CASE("written reports round-trip through the CSV reader") {
  const fs::path dir = fs::temp_directory_path() / "pbreg_cli_fit";
  fs::remove_all(dir);
  auto args = data_args("fit");
  args.insert(args.end(), {"--out", dir.string()});
  REQUIRE(run(args).code == 0);
  std::ifstream f(dir / "fit.csv");
  const Table t = Table::read_csv(f);
  std::ostringstream again;
  t.write_csv(again);
  std::stringstream original;
  original << std::ifstream(dir / "fit.csv").rdbuf();
  CHECK(again.str() == original.str());

  args.insert(args.end(), {"--format", "json"});
  REQUIRE(run(args).code == 0);
  CHECK(fs::exists(dir / "fit.json"));
}
