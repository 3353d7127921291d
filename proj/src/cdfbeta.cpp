#include "pbreg/cdfbeta.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pbreg/errors.hpp"

namespace pbreg {
namespace {

Eigen::Index slope_column(const CdfBetaModel& model, Eigen::Index column) {
  if (column < 0 || column >= model.spec.X.cols()) {
    throw ArgumentError("unknown mean-model column index " + std::to_string(column));
  }
  if ((model.spec.X.col(column).array() == 1.0).all()) {
    throw ArgumentError("marginal effect is undefined for the intercept column");
  }
  return column;
}

double fitted_mu(const CdfBetaModel& model, Eigen::Index row) {
  if (row < 0 || row >= model.spec.rows()) {
    throw ArgumentError("row index " + std::to_string(row) + " out of range");
  }
  const double eta = model.spec.X.row(row).dot(model.fit.beta);
  return 1.0 / (1.0 + std::exp(-eta));
}

}  // namespace

CdfBetaModel fit_cdf_beta(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionSpec& spec,
                          const FitOptions& options) {
  if (y.size() != spec.rows()) {
    throw ArgumentError("response length does not match the design matrices");
  }
  if (!y.allFinite()) throw DomainError("response contains non-finite values");
  if (y.size() >= 1 && (y.array() == y(0)).all()) {
    throw DataError("response is constant; its CDF transform carries no information");
  }
  EmpiricalDistribution dist(y);
  BetaFit fit = fit_beta(dist.cdf_at_data(), spec, options);
  return CdfBetaModel{std::move(fit), std::move(dist), spec};
}

Eigen::VectorXd predict_mu(const CdfBetaModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x_new) {
  if (x_new.cols() != model.fit.beta.size()) {
    throw ArgumentError("prediction X columns do not match the fitted model");
  }
  return inverse_logit((x_new * model.fit.beta).array()).matrix();
}

Eigen::VectorXd predict_y(const CdfBetaModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                          const Eigen::Ref<const Eigen::MatrixXd>& z_new) {
  const std::vector<BetaParams> params = predict_params(model.fit, x_new, z_new);
  const QuantileFunction quantile = model.dist.quantile_function();
  Eigen::VectorXd y(static_cast<Eigen::Index>(params.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = quantile(params[static_cast<std::size_t>(i)].mu);
  return y;
}

PredictionInterval prediction_interval(const std::vector<BetaParams>& params,
                                       const QuantileFunction& quantile, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0,1)");
  const auto m = static_cast<Eigen::Index>(params.size());
  PredictionInterval pi{Eigen::VectorXd(m), Eigen::VectorXd(m), Eigen::VectorXd(m),
                        Eigen::VectorXd(m)};
  const Probability lower_p(0.5 * alpha);
  const Probability upper_p(1.0 - 0.5 * alpha);
  for (Eigen::Index i = 0; i < m; ++i) {
    const BetaParams& bp = params[static_cast<std::size_t>(i)];
    pi.u_lower(i) = beta_quantile(lower_p, bp.shape_a(), bp.shape_b());
    pi.u_upper(i) = std::max(pi.u_lower(i), beta_quantile(upper_p, bp.shape_a(), bp.shape_b()));
    // Quantiles can round to the closed boundary for extreme shapes.
    const double ul = std::clamp(pi.u_lower(i), 1e-300, 1.0 - 1e-16);
    const double uu = std::clamp(pi.u_upper(i), 1e-300, 1.0 - 1e-16);
    pi.lower(i) = quantile(ul);
    pi.upper(i) = std::max(pi.lower(i), quantile(uu));
  }
  return pi;
}

PredictionInterval prediction_interval(const CdfBetaModel& model,
                                       const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                                       const Eigen::Ref<const Eigen::MatrixXd>& z_new, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0,1)");
  return prediction_interval(predict_params(model.fit, x_new, z_new),
                             model.dist.quantile_function(), alpha);
}

double marginal_effect_mu(const CdfBetaModel& model, Eigen::Index column, Eigen::Index row) {
  const Eigen::Index j = slope_column(model, column);
  const double mu = fitted_mu(model, row);
  return model.fit.beta(j) * mu * (1.0 - mu);
}

double marginal_effect_mu(const CdfBetaModel& model, std::string_view column, Eigen::Index row) {
  const auto& names = model.spec.mean_names;
  const auto it = std::find(names.begin(), names.end(), column);
  if (it == names.end()) {
    throw ArgumentError("unknown mean-model column '" + std::string(column) + "'");
  }
  return marginal_effect_mu(model, static_cast<Eigen::Index>(it - names.begin()), row);
}

Eigen::VectorXd default_quantile_grid() {
  return Eigen::VectorXd::LinSpaced(99, 0.01, 0.99);
}

double marginal_effect_y(const CdfBetaModel& model, Eigen::Index column, Eigen::Index row,
                         const Eigen::Ref<const Eigen::VectorXd>& p_grid) {
  const Eigen::Index j = slope_column(model, column);
  const double mu = fitted_mu(model, row);
  const Eigen::VectorXd dq = quantile_derivative(model.dist, p_grid);
  const Eigen::Index m = p_grid.size();
  if (mu < p_grid(0) || mu > p_grid(m - 1)) {
    throw ArgumentError("fitted percentile " + std::to_string(mu) +
                        " lies outside the derivative grid");
  }
  const auto upper = std::upper_bound(p_grid.begin(), p_grid.end(), mu) - p_grid.begin();
  const Eigen::Index hi = std::min<Eigen::Index>(std::max<Eigen::Index>(upper, 1), m - 1);
  const Eigen::Index lo = hi - 1;
  const double w = (mu - p_grid(lo)) / (p_grid(hi) - p_grid(lo));
  const double q_y = (1.0 - w) * dq(lo) + w * dq(hi);
  return model.fit.beta(j) * mu * (1.0 - mu) * q_y;
}

double marginal_effect_y(const CdfBetaModel& model, Eigen::Index column, Eigen::Index row) {
  return marginal_effect_y(model, column, row, default_quantile_grid());
}

double ks_uniform_statistic(const Eigen::Ref<const Eigen::VectorXd>& sample) {
  const Eigen::Index n = sample.size();
  if (n < 1) throw ArgumentError("KS statistic of an empty sample");
  Eigen::VectorXd sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  const double dn = static_cast<double>(n);
  double d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = sorted(i);
    d = std::max({d, static_cast<double>(i + 1) / dn - x, x - static_cast<double>(i) / dn});
  }
  return d;
}

PitResult pit_residuals(const CdfBetaModel& model) {
  const std::vector<BetaParams> params = predict_params(model.fit, model.spec.X, model.spec.Z);
  const Eigen::VectorXd& u = model.u();
  PitResult out;
  out.residuals.resize(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const BetaParams& bp = params[static_cast<std::size_t>(i)];
    out.residuals(i) = beta_cdf(u(i), bp.shape_a(), bp.shape_b());
  }
  out.ks_statistic = ks_uniform_statistic(out.residuals);
  out.p_value = ks_pvalue(out.ks_statistic, static_cast<int>(u.size()));
  return out;
}

}  // namespace pbreg
