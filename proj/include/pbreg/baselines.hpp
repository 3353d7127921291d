#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string_view>

namespace pbreg {

enum class LinearMethod { Ols, Wls, Gls, Log, Reciprocal };

std::string_view method_name(LinearMethod method);

// A fitted linear competitor. Coefficients live on the working scale (raw y,
// ln(y + offset) or 1/(y + offset)); residuals too.
struct LinearFit {
  LinearMethod method = LinearMethod::Ols;
  Eigen::VectorXd coef;
  /// Residual variance on the working scale; weighted fits use sum(w e^2)/(n-p).
  double sigma2 = 0.0;
  Eigen::VectorXd residuals;
  std::optional<Eigen::VectorXd> weights;
  /// (X' W X)^{-1}, with W = I for unweighted fits.
  Eigen::MatrixXd xtwx_inverse;
  Eigen::Index df_residual = 0;

  double offset = 0.0;
  double smearing = 1.0;

  /// WLS: coefficients of the ln(e^2) regression on X.
  Eigen::VectorXd variance_coef;
  /// GLS: variance power delta in Var = sigma^2 |mu|^(2 delta), and the floor on |mu|.
  double power = 0.0;
  double mean_floor = 0.0;

  bool converged = true;
  int iterations = 0;
};

struct IntervalPrediction {
  Eigen::VectorXd fit;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// Least squares through a column-pivoted QR; sigma^2 = e'e / (n - p).
LinearFit fit_ols(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x);

/// Weighted least squares with known positive weights.
LinearFit fit_weighted(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& weights);

/// Two-step feasible WLS: OLS, regress ln(e^2 + eps0) on X, refit with
/// w = 1 / exp(fitted).
LinearFit fit_wls(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x);

struct GlsOptions {
  /// Skip estimation and use this delta.
  std::optional<double> fixed_power;
  int max_iterations = 10;
  double tolerance = 1e-8;
};

/// Iterated feasible GLS with Var(e_i) = sigma^2 |mu_i|^(2 delta).
LinearFit fit_gls_power(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x,
                        const GlsOptions& options = {});

/// OLS on ln(y + c) with Duan smearing for the back-transform.
LinearFit fit_log_ols(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x);

/// OLS on 1/(y + c); point predictions only.
LinearFit fit_reciprocal(const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::MatrixXd>& x);

/// Offsets: 0 when the transform is already safe, else -min(y) + 1e-3 range(y).
double log_offset(const Eigen::Ref<const Eigen::VectorXd>& y);
double reciprocal_offset(const Eigen::Ref<const Eigen::VectorXd>& y);

/// Original-scale point predictions. Reciprocal predictions whose transformed
/// value is numerically zero come back as NaN.
Eigen::VectorXd predict(const LinearFit& fit, const Eigen::Ref<const Eigen::MatrixXd>& x_new);

/// t-based prediction interval at level 1 - alpha (not for reciprocal fits).
IntervalPrediction predict_interval(const LinearFit& fit, const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                                    double alpha);

struct BreuschPagan {
  double statistic = 0.0;
  double p_value = 1.0;
  int df = 0;
};

/// Studentised Breusch–Pagan: n R^2 of e^2 regressed on X, chi-square(p - 1).
BreuschPagan breusch_pagan(const Eigen::Ref<const Eigen::VectorXd>& y,
                           const Eigen::Ref<const Eigen::MatrixXd>& x);

/// Variance inflation factor for every non-intercept column of X
/// (infinite under perfect collinearity).
Eigen::VectorXd vif(const Eigen::Ref<const Eigen::MatrixXd>& x);

}  // namespace pbreg
