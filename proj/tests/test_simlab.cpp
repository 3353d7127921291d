#include <catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "pbreg/errors.hpp"
#include "pbreg/random.hpp"
#include "pbreg/simlab.hpp"

using Catch::Matchers::WithinAbs;
using namespace pbreg;

TEST_CASE("scenario mean and scale functions") {
  const Scenario s1 = make_scenario(ScenarioId::S1);
  CHECK(s1.mean(0, 0) == 1.0);
  CHECK_THAT(s1.scale(0), WithinAbs(std::exp(0.2), 1e-15));
  CHECK(s1.errors == ErrorFamily::Normal);
  const Scenario s2 = make_scenario(ScenarioId::S2);
  CHECK_THAT(s2.scale(1.0), WithinAbs(std::exp(1.4), 1e-14));
  CHECK(s2.errors == ErrorFamily::StudentT3);
  const Scenario s3 = make_scenario(ScenarioId::S3);
  CHECK(s3.mean(0, 0) == 1.0);
  CHECK_THAT(s3.mean(1.0, 2.0), WithinAbs(1.0 + 2.0 * std::sin(1.0) + 1.0, 1e-15));
  CHECK_THAT(s3.scale(-1.0), WithinAbs(std::exp(-0.1), 1e-15));
}

TEST_CASE("scenario ids") {
  CHECK(parse_scenario("S2") == ScenarioId::S2);
  CHECK_THROWS_AS(parse_scenario("S4"), ArgumentError);
  CHECK(scenario_name(ScenarioId::S3) == "S3");
}

TEST_CASE("generated data layout and determinism") {
  const Dataset a = gen_scenario(ScenarioId::S3, 500, 8);
  const Dataset b = gen_scenario(ScenarioId::S3, 500, 8);
  CHECK(a.y == b.y);
  CHECK(a.spec.X == b.spec.X);
  CHECK(a.spec.X.cols() == 3);
  CHECK(a.spec.Z.cols() == 2);
  CHECK((a.spec.X.col(0).array() == 1.0).all());
  CHECK(a.spec.X.col(1) == a.spec.Z.col(1));
  CHECK(a.spec.X.col(1).minCoeff() >= -1.0);
  CHECK(a.spec.X.col(1).maxCoeff() <= 2.0);
  CHECK(gen_scenario(ScenarioId::S3, 500, 9).y != a.y);
  CHECK_THROWS_AS(gen_scenario(ScenarioId::S1, 9, 1), ArgumentError);
}

TEST_CASE("replication reports") {
  const ReplicationResult r = run_replication(ScenarioId::S1, 60, 4);
  for (std::size_t k = 0; k < kSimMethods.size(); ++k) {
    REQUIRE(r[k].has_value());
    CHECK(r[k]->method == kSimMethods[k]);
    CHECK(r[k]->rmse >= 0.0);
    CHECK(r[k]->ks >= 0.0);
    CHECK(r[k]->ks <= 1.0);
  }
  CHECK_FALSE(r[0]->cov80.has_value());
  CHECK_FALSE(r[1]->cov95.has_value());
  CHECK(r[5]->cov80.has_value());
}

TEST_CASE("Monte Carlo with one replication equals the replication") {
  const SimTable t = monte_carlo(ScenarioId::S2, {40}, 1, 99);
  const ReplicationResult r = run_replication(ScenarioId::S2, 40, replicate_seed(99, 0));
  for (std::size_t k = 0; k < kSimMethods.size(); ++k) {
    const MethodSummary& m = t.at(40, kSimMethods[k]);
    CHECK(m.rmse.mean == r[k]->rmse);
    CHECK(m.icdfe.mean == r[k]->icdfe);
  }
}

TEST_CASE("Monte Carlo table layout") {
  const SimTable t = monte_carlo(ScenarioId::S1, {25, 30}, 3, 1);
  const Table table = t.to_table();
  REQUIRE(table.header.size() == 8);
  CHECK(table.header[2] == "Recip");
  CHECK(table.header[7] == "Beta");
  CHECK(table.rows.size() == 10);
  CHECK(table.rows[3][1] == "Cov80");
  CHECK(table.rows[3][2] == "-");
  CHECK(table.rows[3][3] == "-");
  CHECK(table.rows[3][4] != "-");
  CHECK_THROWS_AS(monte_carlo(ScenarioId::S1, {25}, 0, 1), ArgumentError);
}

TEST_CASE("t(3) draws are heavy tailed", "[slow]") {
  int heavy = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(child_seed(2024, seed));
    const int n = 1000000;
    double m1 = 0, m2 = 0, m4 = 0;
    std::vector<double> x(n);
    for (auto& v : x) {
      v = rng.student_t(3.0);
      m1 += v;
    }
    m1 /= n;
    for (double v : x) {
      const double c = (v - m1) * (v - m1);
      m2 += c;
      m4 += c * c;
    }
    m2 /= n;
    m4 /= n;
    if (m4 / (m2 * m2) - 3.0 > 3.0) ++heavy;
  }
  CHECK(heavy >= 19);
}

TEST_CASE("random variates have the right first two moments") {
  Rng rng(17);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sg = 0, sb = 0;
  for (int i = 0; i < n; ++i) {
    su += rng.uniform();
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sg += rng.gamma(0.7);
    sb += rng.beta(2.0, 6.0);
  }
  CHECK_THAT(su / n, WithinAbs(0.5, 0.005));
  CHECK_THAT(sn / n, WithinAbs(0.0, 0.01));
  CHECK_THAT(sn2 / n, WithinAbs(1.0, 0.01));
  CHECK_THAT(sg / n, WithinAbs(0.7, 0.01));
  CHECK_THAT(sb / n, WithinAbs(0.25, 0.003));
  CHECK(child_seed(1, 2) != child_seed(1, 3));
  CHECK(child_seed(1, 2) == child_seed(1, 2));
}
