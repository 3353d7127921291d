#include "pbreg/simlab.hpp"

#include <cmath>
#include <functional>

#include "pbreg/baselines.hpp"
#include "pbreg/cdfbeta.hpp"
#include "pbreg/errors.hpp"
#include "pbreg/parallel.hpp"
#include "pbreg/random.hpp"

namespace pbreg {
namespace {

std::size_t method_slot(std::string_view method) {
  for (std::size_t k = 0; k < kSimMethods.size(); ++k) {
    if (kSimMethods[k] == method) return k;
  }
  throw ArgumentError("unknown method '" + std::string(method) + "'");
}

MetricsReport point_metrics(std::string_view method, const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  if (!y_hat.allFinite()) throw NumericError("non-finite predictions");
  MetricsReport r;
  r.method = std::string(method);
  r.icdfe = icdfe(y, y_hat);
  r.ks = ks_distance(y, y_hat);
  r.rmse = rmse(y, y_hat);
  return r;
}

template <typename Fn>
std::optional<MetricsReport> attempt(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

double Scenario::mean(double x1, double x2) const {
  switch (id) {
    case ScenarioId::S1:
    case ScenarioId::S2:
      return 1.0 + 0.8 * x1 - 0.5 * x2;
    case ScenarioId::S3:
      return 1.0 + 2.0 * std::sin(x1) + 0.5 * x1 * x2;
  }
  return 0.0;
}

double Scenario::scale(double x1) const {
  switch (id) {
    case ScenarioId::S1: return std::exp(0.2 + 0.2 * x1);
    case ScenarioId::S2: return std::exp(0.6 + 0.8 * x1);
    case ScenarioId::S3: return std::exp(0.8 + 0.9 * x1);
  }
  return 1.0;
}

Scenario make_scenario(ScenarioId id) {
  return Scenario{id, id == ScenarioId::S1 ? ErrorFamily::Normal : ErrorFamily::StudentT3};
}

ScenarioId parse_scenario(std::string_view text) {
  if (text == "S1" || text == "s1") return ScenarioId::S1;
  if (text == "S2" || text == "s2") return ScenarioId::S2;
  if (text == "S3" || text == "s3") return ScenarioId::S3;
  throw ArgumentError("unknown scenario '" + std::string(text) + "' (expected S1, S2 or S3)");
}

std::string_view scenario_name(ScenarioId id) {
  switch (id) {
    case ScenarioId::S1: return "S1";
    case ScenarioId::S2: return "S2";
    case ScenarioId::S3: return "S3";
  }
  return "?";
}

Dataset gen_scenario(ScenarioId id, int n, std::uint64_t seed) {
  if (n < 10) throw ArgumentError("scenario datasets need n >= 10");
  const Scenario s = make_scenario(id);
  Rng rng(seed);
  Dataset data;
  data.response_name = "y";
  data.y.resize(n);
  data.spec.X.resize(n, 3);
  data.spec.Z.resize(n, 2);
  data.spec.mean_names = {kInterceptName, "x1", "x2"};
  data.spec.precision_names = {kInterceptName, "x1"};
  for (int i = 0; i < n; ++i) {
    const double x1 = rng.uniform(-1.0, 2.0);
    const double x2 = rng.normal();
    const double eps = s.errors == ErrorFamily::Normal ? rng.normal() : rng.student_t(3.0);
    data.y(i) = s.mean(x1, x2) + s.scale(x1) * eps;
    data.spec.X.row(i) << 1.0, x1, x2;
    data.spec.Z.row(i) << 1.0, x1;
  }
  return data;
}

ReplicationResult run_replication(ScenarioId id, int n, std::uint64_t seed) {
  const Dataset data = gen_scenario(id, n, seed);
  const Eigen::VectorXd& y = data.y;
  const Eigen::MatrixXd& x = data.spec.X;
  ReplicationResult out;

  out[method_slot("Recip")] = attempt([&] {
    return point_metrics("Recip", y, predict(fit_reciprocal(y, x), x));
  });
  out[method_slot("Log")] = attempt([&] {
    return point_metrics("Log", y, predict(fit_log_ols(y, x), x));
  });

  auto linear = [&](std::string_view name, const std::function<LinearFit()>& fitter) {
    return attempt([&] {
      const LinearFit fit = fitter();
      MetricsReport r = point_metrics(name, y, predict(fit, x));
      const IntervalPrediction p80 = predict_interval(fit, x, 0.20);
      const IntervalPrediction p95 = predict_interval(fit, x, 0.05);
      r.cov80 = coverage(y, p80.lower, p80.upper);
      r.cov95 = coverage(y, p95.lower, p95.upper);
      return r;
    });
  };
  out[method_slot("OLS")] = linear("OLS", [&] { return fit_ols(y, x); });
  out[method_slot("GLS")] = linear("GLS", [&] { return fit_gls_power(y, x); });
  out[method_slot("WLS")] = linear("WLS", [&] { return fit_wls(y, x); });

  out[method_slot("Beta")] = attempt([&] {
    const CdfBetaModel model = fit_cdf_beta(y, data.spec);
    MetricsReport r = point_metrics("Beta", y, predict_y(model, x, data.spec.Z));
    const PredictionInterval p80 = prediction_interval(model, x, data.spec.Z, 0.20);
    const PredictionInterval p95 = prediction_interval(model, x, data.spec.Z, 0.05);
    r.cov80 = coverage(y, p80.lower, p80.upper);
    r.cov95 = coverage(y, p95.lower, p95.upper);
    return r;
  });
  return out;
}

std::uint64_t replicate_seed(std::uint64_t seed, int replicate) {
  return child_seed(seed, static_cast<std::uint64_t>(replicate));
}

const MethodSummary& SimTable::at(int n, std::string_view method) const {
  for (const SimBlock& block : blocks) {
    if (block.n == n) return block.methods[method_slot(method)];
  }
  throw ArgumentError("no block for n = " + std::to_string(n));
}

Table SimTable::to_table() const {
  Table table;
  table.header = {"n", "Metric"};
  for (const auto m : kSimMethods) table.header.emplace_back(m);
  auto cell = [](const CellSummary& c) { return c.available() ? format_number(c.mean, 6) : std::string("-"); };
  for (const SimBlock& block : blocks) {
    const std::array<std::pair<const char*, CellSummary MethodSummary::*>, 5> metrics = {{
        {"ICDFE", &MethodSummary::icdfe},
        {"KS", &MethodSummary::ks},
        {"RMSE", &MethodSummary::rmse},
        {"Cov80", &MethodSummary::cov80},
        {"Cov95", &MethodSummary::cov95},
    }};
    for (const auto& [label, member] : metrics) {
      std::vector<std::string> row = {std::to_string(block.n), label};
      for (const MethodSummary& m : block.methods) row.push_back(cell(m.*member));
      table.add_row(std::move(row));
    }
  }
  return table;
}

SimTable monte_carlo(ScenarioId id, const std::vector<int>& sizes, int replications, std::uint64_t seed,
                     unsigned workers) {
  if (replications < 1) throw ArgumentError("Monte Carlo needs at least one replication");
  if (sizes.empty()) throw ArgumentError("Monte Carlo needs at least one sample size");
  SimTable table;
  table.scenario = id;
  table.replications = replications;
  table.seed = seed;
  for (const int n : sizes) {
    std::vector<ReplicationResult> results(static_cast<std::size_t>(replications));
    parallel_for(results.size(), workers, [&](std::size_t r) {
      results[r] = run_replication(id, n, replicate_seed(seed, static_cast<int>(r)));
    });
    SimBlock block;
    block.n = n;
    auto accumulate = [](CellSummary& cell, double value) {
      cell.mean += value;
      ++cell.count;
    };
    for (const ReplicationResult& rep : results) {
      for (std::size_t k = 0; k < kSimMethods.size(); ++k) {
        if (!rep[k]) continue;
        MethodSummary& m = block.methods[k];
        accumulate(m.icdfe, rep[k]->icdfe);
        accumulate(m.ks, rep[k]->ks);
        accumulate(m.rmse, rep[k]->rmse);
        if (rep[k]->cov80) accumulate(m.cov80, *rep[k]->cov80);
        if (rep[k]->cov95) accumulate(m.cov95, *rep[k]->cov95);
      }
    }
    for (MethodSummary& m : block.methods) {
      for (CellSummary* c : {&m.icdfe, &m.ks, &m.rmse, &m.cov80, &m.cov95}) {
        if (c->count > 0) c->mean /= c->count;
      }
    }
    table.blocks.push_back(block);
  }
  return table;
}

}  // namespace pbreg
