#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pbreg/betareg.hpp"

namespace pbreg {

struct BootstrapOptions {
  int replicates = 1000;
  /// Level 1 - alpha for coefficient CIs and prediction intervals.
  double alpha = 0.05;
  std::uint64_t seed = 0;
  /// 0 picks the hardware concurrency. Results do not depend on this.
  unsigned workers = 1;
  FitOptions fit;
};

// Percentile summaries of replicate interval bounds, one entry per prediction row.
struct PredictionBands {
  Eigen::VectorXd lower_median;
  Eigen::VectorXd upper_median;
  Eigen::VectorXd lower_p025;
  Eigen::VectorXd lower_p975;
  Eigen::VectorXd upper_p025;
  Eigen::VectorXd upper_p975;
};

struct BootstrapResult {
  /// Estimate on the original sample.
  Eigen::VectorXd theta_hat;
  /// Successful replicates in index order; one row per replicate.
  Eigen::MatrixXd replicate_thetas;
  std::vector<int> replicate_index;
  /// Per-replicate original-scale interval bounds (rows match replicate_thetas).
  Eigen::MatrixXd replicate_lower;
  Eigen::MatrixXd replicate_upper;
  Eigen::VectorXd se_theta;
  Eigen::VectorXd ci_lower;
  Eigen::VectorXd ci_upper;
  PredictionBands bands;
  int replicates = 0;
  int n_failed = 0;
  std::uint64_t seed = 0;
};

/// Type-7 (linear interpolation) sample quantile.
double sample_quantile(std::vector<double> values, double p);

/// Case-resampling bootstrap of the full two-stage estimator.
///
/// Replicate b draws its row indices from the stream child_seed(seed, b) and
/// refits the whole pipeline on the resample. Interval bounds for
/// (x_new, z_new) go through the resample's own quantile function. Failed or non-converged
/// replicates are dropped and counted; more than half failing raises
/// BootstrapError.
BootstrapResult bootstrap(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionSpec& spec,
                          const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                          const Eigen::Ref<const Eigen::MatrixXd>& z_new, const BootstrapOptions& options);

}  // namespace pbreg
