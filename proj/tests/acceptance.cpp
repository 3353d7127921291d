// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exit status is
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pbreg/betareg.hpp"
#include "pbreg/cdfbeta.hpp"
#include "pbreg/empdist.hpp"
#include "pbreg/random.hpp"
#include "pbreg/resample.hpp"
#include "pbreg/simlab.hpp"
#include "pbreg/specialfn.hpp"

using namespace pbreg;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

constexpr int kReplications = 200;
constexpr std::uint64_t kSimSeed = 20240611;

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)}; }

// Monte Carlo tables shared by the simulation criteria.
const SimTable& study(ScenarioId id) {
  static std::map<ScenarioId, SimTable> cache;
  auto it = cache.find(id);
  if (it == cache.end()) {
    const std::vector<int> sizes = id == ScenarioId::S3 ? std::vector<int>{25, 50, 100} : std::vector<int>{25, 100};
    it = cache.emplace(id, monte_carlo(id, sizes, kReplications, kSimSeed, 0)).first;
  }
  return it->second;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

Verdict coverage_s1() {
  const MethodSummary& b = study(ScenarioId::S1).at(100, "Beta");
  return verdict(within(b.cov80.mean, 0.77, 0.83) && within(b.cov95.mean, 0.93, 0.97),
                 "S1 n=100 Beta Cov80=" + fmt(b.cov80.mean) + " in [0.77,0.83], Cov95=" + fmt(b.cov95.mean) +
                     " in [0.93,0.97]");
}

Verdict coverage_s2() {
  const MethodSummary& b = study(ScenarioId::S2).at(100, "Beta");
  return verdict(within(b.cov95.mean, 0.93, 0.98) && within(b.cov80.mean, 0.76, 0.84),
                 "S2 n=100 Beta Cov95=" + fmt(b.cov95.mean) + " in [0.93,0.98], Cov80=" + fmt(b.cov80.mean) +
                     " in [0.76,0.84]");
}

Verdict coverage_s3() {
  const MethodSummary& b = study(ScenarioId::S3).at(50, "Beta");
  return verdict(within(b.cov95.mean, 0.93, 0.98), "S3 n=50 Beta Cov95=" + fmt(b.cov95.mean) + " in [0.93,0.98]");
}

Verdict orderings() {
  bool ok = true;
  std::string detail;
  for (ScenarioId id : {ScenarioId::S1, ScenarioId::S2, ScenarioId::S3}) {
    for (int n : {25, 100}) {
      const SimTable& t = study(id);
      const double beta_ks = t.at(n, "Beta").ks.mean, ols_ks = t.at(n, "OLS").ks.mean;
      const double log_ks = t.at(n, "Log").ks.mean, recip_ks = t.at(n, "Recip").ks.mean;
      const double beta_ic = t.at(n, "Beta").icdfe.mean, ols_ic = t.at(n, "OLS").icdfe.mean;
      const bool a = beta_ks < ols_ks;
      const bool b = beta_ic < 0.5 * ols_ic;
      const bool c = ols_ks < log_ks && log_ks < recip_ks;
      ok = ok && a && b && c;
      detail += std::string("\n      ") + std::string(scenario_name(id)) + " n=" + std::to_string(n) +
                ": KS beta/OLS/log/recip=" + fmt(beta_ks, 3) + "/" + fmt(ols_ks, 3) + "/" + fmt(log_ks, 3) + "/" +
                fmt(recip_ks, 3) + " ICDFE beta/OLS=" + fmt(beta_ic, 5) + "/" + fmt(ols_ic, 5) + " [" +
                (a ? "ok" : "beta KS>=OLS") + "," + (b ? "ok" : "ICDFE ratio") + "," + (c ? "ok" : "KS order") + "]";
    }
  }
  return verdict(ok, "beta KS < OLS KS, beta ICDFE < 0.5 OLS ICDFE, OLS KS < log KS < recip KS" + detail);
}

Verdict rmse_s1() {
  const double beta = study(ScenarioId::S1).at(100, "Beta").rmse.mean;
  const double ols = study(ScenarioId::S1).at(100, "OLS").rmse.mean;
  return verdict(std::abs(beta / ols - 1.0) <= 0.10,
                 "S1 n=100 RMSE beta=" + fmt(beta) + " OLS=" + fmt(ols) + " ratio=" + fmt(beta / ols));
}

// Concrete compressive strength data, supplied by the user.
std::string concrete_csv() {
  if (const char* env = std::getenv("PBREG_CONCRETE_CSV"); env && *env) return env;
  return PBREG_CONCRETE_CSV_DEFAULT;
}

cli::RunConfig concrete_config(const std::string& command) {
  cli::RunConfig c;
  c.command = command;
  c.input = concrete_csv();
  c.response = "strength";
  c.mean_cols = {"cement", "slag", "fly_ash", "water", "superplasticizer", "age_days"};
  c.precision_cols = {"slag", "water"};
  return c;
}

const std::vector<std::string>* row_with(const Table& t, std::size_t column, const std::string& key,
                                         std::size_t column2 = 0, const std::string& key2 = "") {
  for (const auto& row : t.rows) {
    if (row[column] == key && (key2.empty() || row[column2] == key2)) return &row;
  }
  return nullptr;
}

Verdict concrete_fit() {
  if (concrete_csv().empty()) return {Outcome::Skip, "concrete dataset not supplied (set PBREG_CONCRETE_CSV)"};
  const Table t = cli::cmd_fit(concrete_config("fit")).front().table;
  auto est = [&](const std::string& term) { return std::stod((*row_with(t, 1, term, 0, "mean"))[2]); };
  const bool signs = est("cement") > 0 && est("slag") > 0 && est("fly_ash") > 0 && est("water") < 0 &&
                     est("superplasticizer") > 0 && est("age_days") > 0;
  const double water = est("water");
  const double r2 = std::stod((*row_with(t, 1, "pseudo.R2"))[2]);
  return verdict(signs && std::abs(water + 0.0159) <= 0.005 && std::abs(r2 - 0.571) <= 0.05,
                 std::string("sign pattern ") + (signs ? "ok" : "wrong") + ", water=" + fmt(water, 5) +
                     " (target -0.0159 +/- 0.005), pseudo-R2=" + fmt(r2, 3) + " (target 0.571 +/- 0.05)");
}

Verdict concrete_compare() {
  if (concrete_csv().empty()) return {Outcome::Skip, "concrete dataset not supplied (set PBREG_CONCRETE_CSV)"};
  const Table t = cli::cmd_compare(concrete_config("compare")).front().table;
  const auto& beta = *row_with(t, 0, "CDF-beta");
  const auto& ols = *row_with(t, 0, "OLS");
  const double beta_rmse = std::stod(beta[1]), beta_cov95 = std::stod(beta[3]), ols_rmse = std::stod(ols[1]);
  return verdict(std::abs(beta_rmse / 10.544 - 1) <= 0.05 && within(beta_cov95, 0.94, 0.965) &&
                     std::abs(ols_rmse / 10.520 - 1) <= 0.05,
                 "CDF-beta RMSE=" + fmt(beta_rmse, 3) + " (10.544 +/- 5%), Cov95=" + fmt(beta_cov95, 3) +
                     " in [0.94,0.965], OLS RMSE=" + fmt(ols_rmse, 3) + " (10.520 +/- 5%)");
}

Verdict concrete_diagnose() {
  if (concrete_csv().empty()) return {Outcome::Skip, "concrete dataset not supplied (set PBREG_CONCRETE_CSV)"};
  const Table t = cli::cmd_diagnose(concrete_config("diagnose")).front().table;
  const auto& bp = *row_with(t, 0, "breusch_pagan");
  const double stat = std::stod(bp[2]), p = std::stod(bp[3]);
  const bool soft = within(stat, 90, 145);
  return verdict(p < 0.001, "BP p=" + fmt(p, 6) + " < 0.001; statistic=" + fmt(stat, 2) +
                                (soft ? " within" : " outside") + " soft band [90,145]");
}

Verdict score_check() {
  double worst = 0.0;
  Rng rng(901);
  for (int f = 0; f < 5; ++f) {
    const auto d = fixture::beta_regression(60 + 40 * f, 1000 + f);
    for (int k = 0; k < 4; ++k) {
      Eigen::VectorXd theta(5);
      for (auto& v : theta) v = rng.uniform(-1.5, 1.5);
      theta(3) = rng.uniform(0.0, 4.0);
      auto ll = [&](const Eigen::VectorXd& t) { return beta_loglik(t.head(3), t.tail(2), d.u, d.spec); };
      const Eigen::VectorXd fd = oracle::central_gradient(ll, theta, 1e-5);
      const Eigen::VectorXd g = beta_score(theta.head(3), theta.tail(2), d.u, d.spec);
      worst = std::max(worst, (g - fd).norm() / std::max(fd.norm(), 1.0));
    }
  }
  return verdict(worst < 1e-4, "max relative error " + sci(worst) + " over 20 points, 5 fixtures");
}

// Mass of a beta density on (0, 1/2]: log-substituted quadrature on
// [1e-30, 1/2] plus the analytic power-law tail below 1e-30.
double lower_half_mass(const BetaParams& params) {
  const double a = params.shape_a(), b = params.shape_b();
  const double delta = 1e-30;
  const double tail = std::exp(a * std::log(delta) - std::log(a) - std::lgamma(a) - std::lgamma(b) + std::lgamma(a + b));
  const double body = oracle::integrate(
      [&](double t) { return std::exp(beta_logpdf(std::exp(t), params) + t); }, std::log(delta), std::log(0.5), 9);
  return tail + body;
}

Verdict beta_distribution_check() {
  const double shapes[] = {0.2, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0};
  double round_trip = 0.0;
  int checked = 0, ill_conditioned = 0;
  for (double a : shapes) {
    for (double b : shapes) {
      for (double x = 0.01; x < 0.995; x += 0.049) {
        const double p = beta_cdf(x, a, b);
        if (p <= 0.0 || p >= 1.0) continue;
        // Rounding p to a double alone moves the quantile by about ulp(p)/density.
        const double density = oracle::beta_pdf(x, a, b);
        if (std::numeric_limits<double>::epsilon() * p / density > 1e-9) {
          ++ill_conditioned;
          continue;
        }
        ++checked;
        round_trip = std::max(round_trip, std::abs(beta_quantile(Probability(p), a, b) - x));
      }
    }
  }
  double mass = 0.0;
  for (double mu : {0.05, 0.3, 0.5, 0.8, 0.97}) {
    for (double phi : {0.5, 2.0, 10.0, 80.0, 500.0}) {
      // The upper half is the lower half of the reflected density.
      const double total = lower_half_mass(BetaParams::make(mu, phi)) + lower_half_mass(BetaParams::make(1 - mu, phi));
      mass = std::max(mass, std::abs(total - 1.0));
    }
  }
  return verdict(round_trip < 1e-8 && mass < 1e-4,
                 "max |Q(F(x))-x|=" + sci(round_trip) + " on " + std::to_string(checked) + " points (" +
                     std::to_string(ill_conditioned) + " skipped where rounding p exceeds 1e-9), max |mass-1|=" + sci(mass));
}

Verdict hd_weight_check() {
  Rng rng(4242);
  double worst = 0.0;
  double most_negative = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto n = static_cast<Eigen::Index>(1 + rng.index(5000));
    const double p = rng.uniform();
    const Eigen::VectorXd w = hd_weights(n, Probability(p));
    worst = std::max(worst, std::abs(w.sum() - 1.0));
    most_negative = std::min(most_negative, w.minCoeff());
  }
  return verdict(worst <= 1e-12 && most_negative >= 0.0,
                 "max |sum-1|=" + sci(worst) + ", min weight=" + sci(most_negative));
}

Verdict affine_check() {
  double coef = 0.0, pred = 0.0;
  Rng rng(77);
  for (int k = 0; k < 10; ++k) {
    const Dataset d = gen_scenario(ScenarioId::S2, 120, child_seed(303, k));
    const double a = rng.uniform(-50, 50), b = rng.uniform(0.01, 100);
    const Eigen::VectorXd y2 = (a + b * d.y.array()).matrix();
    const CdfBetaModel m1 = fit_cdf_beta(d.y, d.spec);
    const CdfBetaModel m2 = fit_cdf_beta(y2, d.spec);
    coef = std::max(coef, (m1.fit.theta() - m2.fit.theta()).cwiseAbs().maxCoeff());
    const Eigen::VectorXd p1 = predict_y(m1, d.spec.X, d.spec.Z);
    const Eigen::VectorXd p2 = predict_y(m2, d.spec.X, d.spec.Z);
    const double scale = y2.cwiseAbs().maxCoeff();
    pred = std::max(pred, ((a + b * p1.array()).matrix() - p2).cwiseAbs().maxCoeff() / scale);
  }
  return verdict(coef < 1e-10 && pred < 1e-10,
                 "max coefficient gap " + sci(coef) + ", max relative prediction gap " + sci(pred));
}

Verdict recovery_check() {
  int good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = fixture::beta_regression(2000, child_seed(555, trial));
    const BetaFit fit = fit_beta(d.u, d.spec);
    bool inside = fit.converged;
    for (int j = 0; j < 3; ++j) inside = inside && std::abs(fit.beta(j) - d.beta(j)) <= 3 * fit.se_beta(j);
    for (int j = 0; j < 2; ++j) inside = inside && std::abs(fit.gamma(j) - d.gamma(j)) <= 3 * fit.se_gamma(j);
    good += inside;
  }
  return verdict(good >= 95, std::to_string(good) + "/100 trials with every coefficient within 3 SE");
}

Verdict edf_check() {
  auto sup_error = [](int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXd y(n);
    for (auto& v : y) v = rng.normal();
    const Eigen::VectorXd u = fc_hermite_cdf(y);
    double d = 0.0;
    for (int i = 0; i < n; ++i) d = std::max(d, std::abs(u(i) - oracle::normal_cdf(y(i))));
    return d;
  };
  int good = 0;
  for (int t = 0; t < 50; ++t) good += sup_error(10000, child_seed(71, 2 * t)) < sup_error(100, child_seed(71, 2 * t + 1));
  return verdict(good >= 48, std::to_string(good) + "/50 trials with sup-error(n=10000) < sup-error(n=100)");
}

Verdict determinism_check() {
  const SimTable a = monte_carlo(ScenarioId::S2, {40}, 30, 8080, 1);
  const SimTable b = monte_carlo(ScenarioId::S2, {40}, 30, 8080, 1);
  const SimTable c = monte_carlo(ScenarioId::S2, {40}, 30, 8080, 4);
  bool sim_same = true;
  for (const auto m : kSimMethods) {
    for (const SimTable* other : {&b, &c}) {
      const MethodSummary &x = a.at(40, m), &y = other->at(40, m);
      sim_same = sim_same && x.icdfe.mean == y.icdfe.mean && x.ks.mean == y.ks.mean && x.rmse.mean == y.rmse.mean &&
                 x.cov80.mean == y.cov80.mean && x.cov95.mean == y.cov95.mean;
    }
  }
  const Dataset d = gen_scenario(ScenarioId::S1, 80, 9);
  BootstrapOptions options;
  options.replicates = 40;
  options.seed = 6060;
  options.workers = 1;
  const BootstrapResult r1 = bootstrap(d.y, d.spec, d.spec.X.topRows(4), d.spec.Z.topRows(4), options);
  const BootstrapResult r2 = bootstrap(d.y, d.spec, d.spec.X.topRows(4), d.spec.Z.topRows(4), options);
  options.workers = 4;
  const BootstrapResult r3 = bootstrap(d.y, d.spec, d.spec.X.topRows(4), d.spec.Z.topRows(4), options);
  const bool boot_same = r1.replicate_thetas == r2.replicate_thetas && r1.replicate_thetas == r3.replicate_thetas &&
                         r1.replicate_lower == r3.replicate_lower && r1.se_theta == r3.se_theta &&
                         r1.ci_lower == r3.ci_lower && r1.bands.upper_median == r3.bands.upper_median;
  return verdict(sim_same && boot_same, std::string("monte_carlo ") + (sim_same ? "identical" : "DIFFERS") +
                                            ", bootstrap " + (boot_same ? "identical" : "DIFFERS") +
                                            " (two runs, 1 vs 4 workers)");
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria = {
      {1, coverage_s1},     {2, coverage_s2},        {3, coverage_s3},       {4, orderings},
      {5, rmse_s1},         {6, concrete_fit},       {7, concrete_compare},  {8, concrete_diagnose},
      {9, score_check},     {10, beta_distribution_check}, {11, hd_weight_check}, {12, affine_check},
      {13, recovery_check}, {14, edf_check},         {15, determinism_check},
  };
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* label = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    std::printf("criterion %2d %s  %s  (%.1fs)\n", id, label, v.detail.c_str(), seconds);
    std::fflush(stdout);
    failed += v.outcome == Outcome::Fail;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
