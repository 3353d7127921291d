#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

namespace pbreg {

// Accuracy summary of one method on one dataset. Coverage is absent for
// methods without valid prediction intervals.
struct MetricsReport {
  std::string method;
  double icdfe = 0.0;
  double ks = 0.0;
  double rmse = 0.0;
  std::optional<double> cov80;
  std::optional<double> cov95;
};

/// Integrated squared gap between the ECDFs of y_true and y_pred: trapezoid
/// rule over the pooled sorted support, divided by the pooled range.
double icdfe(const Eigen::Ref<const Eigen::VectorXd>& y_true, const Eigen::Ref<const Eigen::VectorXd>& y_pred);

/// Largest absolute ECDF gap over the pooled sample points.
double ks_distance(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

/// Fraction of y inside [lower, upper], bounds inclusive.
double coverage(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& lower,
                const Eigen::Ref<const Eigen::VectorXd>& upper);

double rmse(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& y_hat);

}  // namespace pbreg
