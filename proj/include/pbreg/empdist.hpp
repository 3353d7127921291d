#pragma once

#include <Eigen/Dense>
#include <memory>

#include "pbreg/specialfn.hpp"

namespace pbreg {

/// Smoothed empirical CDF at each observation, in input order. Ties share
/// the FC-Hermite value at their averaged rank (linear between neighbouring
/// integer ranks). Needs n >= 3 finite values; outputs lie in [1/n, (n-1)/n].
Eigen::VectorXd fc_hermite_cdf(const Eigen::Ref<const Eigen::VectorXd>& y);

/// Harrell–Davis weights w_i(p), i = 1..n: increments of I_x((n+1)p, (n+1)(1-p))
/// over the grid x = i/n.
Eigen::VectorXd hd_weights(Eigen::Index n, Probability p);

/// Harrell–Davis quantile of an ascending sample (any n >= 1).
double hd_quantile(const Eigen::Ref<const Eigen::VectorXd>& sorted, Probability p);

// Callable p -> Q(p) backed by the Harrell–Davis estimator. Cheap to copy;
// shares the sorted sample with the distribution it came from.
class QuantileFunction {
 public:
  explicit QuantileFunction(std::shared_ptr<const Eigen::VectorXd> sorted);

  double operator()(double p) const;
  Eigen::VectorXd operator()(const Eigen::Ref<const Eigen::VectorXd>& ps) const;

 private:
  std::shared_ptr<const Eigen::VectorXd> sorted_;
};

// Immutable nonparametric summary of a response sample: its order statistics
// plus tie-aware FC-Hermite CDF values per observation.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(const Eigen::Ref<const Eigen::VectorXd>& y);

  [[nodiscard]] Eigen::Index size() const { return sorted_->size(); }
  [[nodiscard]] const Eigen::VectorXd& sorted_values() const { return *sorted_; }
  /// U_i for each observation in original order.
  [[nodiscard]] const Eigen::VectorXd& cdf_at_data() const { return cdf_at_data_; }
  [[nodiscard]] double quantile(double p) const;
  [[nodiscard]] QuantileFunction quantile_function() const { return QuantileFunction(sorted_); }

 private:
  std::shared_ptr<const Eigen::VectorXd> sorted_;
  Eigen::VectorXd cdf_at_data_;
};

double hd_quantile(const EmpiricalDistribution& dist, Probability p);

QuantileFunction quantile_fn(const EmpiricalDistribution& dist);

/// dQ/dp on a strictly increasing grid in (0,1): central differences inside,
/// one-sided at the ends, negative noise floored at zero.
Eigen::VectorXd quantile_derivative(const EmpiricalDistribution& dist,
                                    const Eigen::Ref<const Eigen::VectorXd>& p_grid);

}  // namespace pbreg
