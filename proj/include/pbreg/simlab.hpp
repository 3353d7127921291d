#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pbreg/dataset.hpp"
#include "pbreg/metrics.hpp"
#include "pbreg/table.hpp"

namespace pbreg {

enum class ScenarioId { S1, S2, S3 };

enum class ErrorFamily { Normal, StudentT3 };

// Data-generating design Y = mu(x1, x2) + sigma(x1) * eps with
// x1 ~ Uniform(-1, 2), x2 ~ N(0, 1).
struct Scenario {
  ScenarioId id;
  ErrorFamily errors;

  [[nodiscard]] double mean(double x1, double x2) const;
  [[nodiscard]] double scale(double x1) const;
};

Scenario make_scenario(ScenarioId id);
ScenarioId parse_scenario(std::string_view text);
std::string_view scenario_name(ScenarioId id);

/// Seeded draw of n rows: y, X = [1, x1, x2], Z = [1, x1].
Dataset gen_scenario(ScenarioId id, int n, std::uint64_t seed);

/// Methods in table column order.
inline constexpr std::array<std::string_view, 6> kSimMethods = {"Recip", "Log", "OLS", "GLS", "WLS", "Beta"};

/// One report slot per method in kSimMethods order; empty when the method failed.
using ReplicationResult = std::array<std::optional<MetricsReport>, kSimMethods.size()>;

/// Fits all six methods in-sample on one generated dataset.
ReplicationResult run_replication(ScenarioId id, int n, std::uint64_t seed);

/// Seed handed to replicate r of a Monte Carlo run.
std::uint64_t replicate_seed(std::uint64_t seed, int replicate);

// Mean of one metric over the replicates that produced it.
struct CellSummary {
  double mean = 0.0;
  int count = 0;
  [[nodiscard]] bool available() const { return count > 0; }
};

struct MethodSummary {
  CellSummary icdfe, ks, rmse, cov80, cov95;
};

struct SimBlock {
  int n = 0;
  std::array<MethodSummary, kSimMethods.size()> methods;
};

struct SimTable {
  ScenarioId scenario = ScenarioId::S1;
  int replications = 0;
  std::uint64_t seed = 0;
  std::vector<SimBlock> blocks;

  [[nodiscard]] const MethodSummary& at(int n, std::string_view method) const;
  /// One row per (n, metric); method columns follow kSimMethods.
  [[nodiscard]] Table to_table() const;
};

/// Averages run_replication over R seeded replicates for each n. Output is
/// identical for any worker count.
SimTable monte_carlo(ScenarioId id, const std::vector<int>& sizes, int replications, std::uint64_t seed,
                     unsigned workers = 1);

}  // namespace pbreg
