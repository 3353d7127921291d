#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pbreg/specialfn.hpp"

namespace pbreg {

// Logistic inverse link, elementwise on any Eigen array expression.
template <typename Derived>
auto inverse_logit(const Eigen::ArrayBase<Derived>& eta) {
  return (1.0 + (-eta).exp()).inverse();
}

template <typename Derived>
auto logit(const Eigen::ArrayBase<Derived>& mu) {
  return (mu / (1.0 - mu)).log();
}

// Mean–precision beta parameters; shapes are a = mu*phi, b = (1-mu)*phi.
struct BetaParams {
  double mu;
  double phi;

  /// Validating factory: 0 < mu < 1, phi > 0.
  static BetaParams make(double mu, double phi);

  [[nodiscard]] double shape_a() const { return mu * phi; }
  [[nodiscard]] double shape_b() const { return (1.0 - mu) * phi; }
};

// Mean-model (X, logit link) and precision-model (Z, log link) designs.
struct RegressionSpec {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Z;
  std::vector<std::string> mean_names;
  std::vector<std::string> precision_names;

  [[nodiscard]] Eigen::Index rows() const { return X.rows(); }
  [[nodiscard]] Eigen::Index mean_size() const { return X.cols(); }
  [[nodiscard]] Eigen::Index precision_size() const { return Z.cols(); }

  /// Throws ArgumentError when the designs are inconsistent or rank deficient.
  void validate() const;
};

struct FitOptions {
  double gradient_tolerance = 1e-6;
  int max_iterations = 500;
};

struct BetaFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;
  double loglik = 0.0;
  Eigen::VectorXd se_beta;
  Eigen::VectorXd se_gamma;
  /// Covariance of (beta, gamma) from the inverse observed information.
  Eigen::MatrixXd covariance;
  double pseudo_r2 = 0.0;
  bool converged = false;
  int iterations = 0;

  [[nodiscard]] Eigen::VectorXd theta() const;
};

double beta_logpdf(double u, BetaParams params);

inline double beta_variance(BetaParams params) {
  return params.mu * (1.0 - params.mu) / (1.0 + params.phi);
}

/// Beta log-likelihood of U under mu = logit^-1(X beta), phi = exp(Z gamma).
double beta_loglik(const Eigen::Ref<const Eigen::VectorXd>& beta,
                   const Eigen::Ref<const Eigen::VectorXd>& gamma,
                   const Eigen::Ref<const Eigen::VectorXd>& u, const RegressionSpec& spec);

/// Analytic gradient of beta_loglik with respect to (beta, gamma).
Eigen::VectorXd beta_score(const Eigen::Ref<const Eigen::VectorXd>& beta,
                           const Eigen::Ref<const Eigen::VectorXd>& gamma,
                           const Eigen::Ref<const Eigen::VectorXd>& u, const RegressionSpec& spec);

/// Maximum-likelihood fit by BFGS with backtracking line search.
///
/// Iterates on internally centred and scaled design columns (an invertible
/// reparameterisation, so the optimum is unchanged) and reports everything in
/// the caller's coordinates. Non-convergence is reported through
/// BetaFit::converged with the best point found.
BetaFit fit_beta(const Eigen::Ref<const Eigen::VectorXd>& u, const RegressionSpec& spec,
                 const FitOptions& options = {});

/// Starting point used by fit_beta: least squares of logit(U) on X for beta,
/// a moment estimate of phi for the precision intercept.
Eigen::VectorXd initial_theta(const Eigen::Ref<const Eigen::VectorXd>& u,
                              const RegressionSpec& spec);

std::vector<BetaParams> predict_params(const BetaFit& fit, const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                                       const Eigen::Ref<const Eigen::MatrixXd>& z_new);

}  // namespace pbreg
