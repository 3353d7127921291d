#pragma once

#include <Eigen/Dense>
#include <string_view>

#include "pbreg/betareg.hpp"
#include "pbreg/empdist.hpp"

namespace pbreg {

// Beta regression fitted on FC-Hermite percentiles of a response, bound to the
// empirical distribution used for the forward transform and the back-map.
struct CdfBetaModel {
  BetaFit fit;
  EmpiricalDistribution dist;
  RegressionSpec spec;

  /// Percentile-scale training response U_i.
  [[nodiscard]] const Eigen::VectorXd& u() const { return dist.cdf_at_data(); }
};

/// Two-stage fit: U = FC-Hermite CDF of y, then beta regression of U on spec.
/// A constant response is rejected with DataError.
CdfBetaModel fit_cdf_beta(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionSpec& spec,
                          const FitOptions& options = {});

/// Fitted percentiles mu_hat for new rows.
Eigen::VectorXd predict_mu(const CdfBetaModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x_new);

/// Original-scale predictions Q_Y(mu_hat) through the training quantile function.
Eigen::VectorXd predict_y(const CdfBetaModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                          const Eigen::Ref<const Eigen::MatrixXd>& z_new);

struct PredictionInterval {
  Eigen::VectorXd u_lower;
  Eigen::VectorXd u_upper;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// Equal-tailed 1 - alpha interval: beta quantiles on the percentile scale,
/// mapped through Q_Y.
PredictionInterval prediction_interval(const CdfBetaModel& model,
                                       const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                                       const Eigen::Ref<const Eigen::MatrixXd>& z_new, double alpha);

/// Same interval for explicit beta parameters and a given quantile function.
PredictionInterval prediction_interval(const std::vector<BetaParams>& params,
                                       const QuantileFunction& quantile, double alpha);

/// d mu / d x_j = beta_j mu (1 - mu) at training row `row`.
double marginal_effect_mu(const CdfBetaModel& model, Eigen::Index column, Eigen::Index row);
double marginal_effect_mu(const CdfBetaModel& model, std::string_view column, Eigen::Index row);

/// Percentile grid 0.01, 0.02, ..., 0.99 used for q_Y.
Eigen::VectorXd default_quantile_grid();

/// d y / d x_j = beta_j mu (1 - mu) q_Y(mu), with q_Y the numerical quantile
/// derivative on p_grid linearly interpolated at mu.
double marginal_effect_y(const CdfBetaModel& model, Eigen::Index column, Eigen::Index row,
                         const Eigen::Ref<const Eigen::VectorXd>& p_grid);
double marginal_effect_y(const CdfBetaModel& model, Eigen::Index column, Eigen::Index row);

struct PitResult {
  Eigen::VectorXd residuals;
  double ks_statistic = 0.0;
  double p_value = 1.0;
};

/// Probability-integral-transform residuals F(U_i; mu_i, phi_i) and a KS test
/// of their uniformity.
PitResult pit_residuals(const CdfBetaModel& model);

/// One-sample KS distance of a sample against Uniform(0,1).
double ks_uniform_statistic(const Eigen::Ref<const Eigen::VectorXd>& sample);

}  // namespace pbreg
