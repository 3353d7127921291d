#include "pbreg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pbreg/errors.hpp"
#include "pbreg/specialfn.hpp"

namespace pbreg {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LeastSquares {
  Eigen::VectorXd coef;
  Eigen::MatrixXd xtx_inverse;
};

LeastSquares solve_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  const Eigen::Index p = x.cols();
  if (qr.rank() < p) throw ArgumentError("design matrix is rank deficient");
  LeastSquares out;
  out.coef = qr.solve(y);
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd unpermuted = r_inv * r_inv.transpose();
  out.xtx_inverse = qr.colsPermutation() * unpermuted * qr.colsPermutation().transpose();
  return out;
}

void check_shapes(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x) {
  if (y.size() != x.rows()) {
    throw ArgumentError("response length " + std::to_string(y.size()) + " does not match " +
                        std::to_string(x.rows()) + " design rows");
  }
  if (x.rows() <= x.cols()) throw ArgumentError("need more observations than coefficients");
  if (!y.allFinite() || !x.allFinite()) throw ArgumentError("non-finite regression input");
}

double sample_variance(const Eigen::ArrayXd& v) {
  const double n = static_cast<double>(v.size());
  return (v - v.mean()).square().sum() / std::max(1.0, n - 1.0);
}

// Additive guard inside ln(e^2 + eps0).
double log_guard(const Eigen::Ref<const Eigen::VectorXd>& y) {
  const double v = sample_variance(y.array());
  return v > 0.0 ? 1e-8 * v : 1e-300;
}

double centred_r_squared(const Eigen::VectorXd& target, const Eigen::VectorXd& fitted) {
  const double mean = target.mean();
  const double total = (target.array() - mean).square().sum();
  if (!(total > 0.0)) return 0.0;
  const double resid = (target - fitted).squaredNorm();
  return std::clamp(1.0 - resid / total, 0.0, 1.0);
}

Eigen::VectorXd gls_weights(const Eigen::VectorXd& mean, double floor, double power) {
  return mean.array().abs().max(floor).pow(-2.0 * power).matrix();
}

double mean_floor_for(const Eigen::VectorXd& mean) {
  const double top = mean.array().abs().maxCoeff();
  return top > 0.0 ? 1e-2 * top : 1e-12;
}

}  // namespace

std::string_view method_name(LinearMethod method) {
  switch (method) {
    case LinearMethod::Ols: return "OLS";
    case LinearMethod::Wls: return "WLS";
    case LinearMethod::Gls: return "GLS";
    case LinearMethod::Log: return "Log";
    case LinearMethod::Reciprocal: return "Recip";
  }
  return "?";
}

LinearFit fit_ols(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x) {
  check_shapes(y, x);
  const LeastSquares ls = solve_least_squares(x, y);
  LinearFit fit;
  fit.method = LinearMethod::Ols;
  fit.coef = ls.coef;
  fit.xtwx_inverse = ls.xtx_inverse;
  fit.residuals = y - x * ls.coef;
  fit.df_residual = x.rows() - x.cols();
  fit.sigma2 = fit.residuals.squaredNorm() / static_cast<double>(fit.df_residual);
  return fit;
}

LinearFit fit_weighted(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& weights) {
  check_shapes(y, x);
  if (weights.size() != y.size()) throw ArgumentError("weight vector length mismatch");
  if (!(weights.array() > 0.0).all() || !weights.allFinite()) {
    throw ArgumentError("weights must be positive and finite");
  }
  const Eigen::VectorXd root = weights.cwiseSqrt();
  const Eigen::MatrixXd xw = root.asDiagonal() * x;
  const Eigen::VectorXd yw = root.cwiseProduct(y);
  const LeastSquares ls = solve_least_squares(xw, yw);
  LinearFit fit;
  fit.method = LinearMethod::Wls;
  fit.coef = ls.coef;
  fit.xtwx_inverse = ls.xtx_inverse;
  fit.residuals = y - x * ls.coef;
  fit.weights = weights;
  fit.df_residual = x.rows() - x.cols();
  fit.sigma2 = (weights.array() * fit.residuals.array().square()).sum() /
               static_cast<double>(fit.df_residual);
  return fit;
}

LinearFit fit_wls(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const LinearFit ols = fit_ols(y, x);
  const double eps0 = log_guard(y);
  const Eigen::VectorXd log_sq = (ols.residuals.array().square() + eps0).log().matrix();
  const LeastSquares aux = solve_least_squares(x, log_sq);
  const Eigen::VectorXd weights = (-(x * aux.coef).array()).exp().matrix();
  LinearFit fit = fit_weighted(y, x, weights);
  fit.variance_coef = aux.coef;
  return fit;
}

LinearFit fit_gls_power(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x,
                        const GlsOptions& options) {
  LinearFit current = fit_ols(y, x);
  const double eps0 = log_guard(y);
  double power = options.fixed_power.value_or(0.0);
  double floor = mean_floor_for(x * current.coef);
  bool converged = false;
  int iter = 0;
  while (iter < options.max_iterations) {
    ++iter;
    const Eigen::VectorXd mean = x * current.coef;
    floor = mean_floor_for(mean);
    if (!options.fixed_power) {
      Eigen::MatrixXd aux(x.rows(), 2);
      aux.col(0).setOnes();
      aux.col(1) = mean.array().abs().max(floor).log().matrix();
      const Eigen::VectorXd log_sq = (current.residuals.array().square() + eps0).log().matrix();
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(aux);
      qr.setThreshold(1e-10);
      // Constant |mu| leaves delta unidentified; fall back to zero.
      power = qr.rank() == 2 ? 0.5 * qr.solve(log_sq)(1) : 0.0;
    }
    LinearFit next = fit_weighted(y, x, gls_weights(mean, floor, power));
    const double change = (next.coef - current.coef).lpNorm<Eigen::Infinity>();
    current = std::move(next);
    if (change < options.tolerance) {
      converged = true;
      break;
    }
  }
  current.method = LinearMethod::Gls;
  current.power = power;
  current.mean_floor = floor;
  current.converged = converged;
  current.iterations = iter;
  return current;
}

double log_offset(const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (y.size() == 0) throw ArgumentError("empty response");
  const double lo = y.minCoeff();
  if (lo > 0.0) return 0.0;
  return -lo + 1e-3 * (y.maxCoeff() - lo);
}

double reciprocal_offset(const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (y.size() == 0) throw ArgumentError("empty response");
  if (y.cwiseAbs().minCoeff() > 1e-8) return 0.0;
  const double lo = y.minCoeff();
  return -lo + 1e-3 * (y.maxCoeff() - lo);
}

LinearFit fit_log_ols(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const double c = log_offset(y);
  const Eigen::ArrayXd shifted = y.array() + c;
  if (!(shifted > 0.0).all()) throw DataError("log transform needs y + offset > 0");
  LinearFit fit = fit_ols(shifted.log().matrix(), x);
  fit.method = LinearMethod::Log;
  fit.offset = c;
  fit.smearing = fit.residuals.array().exp().mean();
  return fit;
}

LinearFit fit_reciprocal(const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const double c = reciprocal_offset(y);
  const Eigen::ArrayXd shifted = y.array() + c;
  if (!(shifted.abs() > 0.0).all()) throw DataError("reciprocal transform needs y + offset != 0");
  LinearFit fit = fit_ols(shifted.inverse().matrix(), x);
  fit.method = LinearMethod::Reciprocal;
  fit.offset = c;
  return fit;
}

Eigen::VectorXd predict(const LinearFit& fit, const Eigen::Ref<const Eigen::MatrixXd>& x_new) {
  if (x_new.cols() != fit.coef.size()) throw ArgumentError("prediction columns do not match the fit");
  const Eigen::VectorXd linear = x_new * fit.coef;
  switch (fit.method) {
    case LinearMethod::Log:
      return (linear.array().exp() * fit.smearing - fit.offset).matrix();
    case LinearMethod::Reciprocal: {
      Eigen::VectorXd out(linear.size());
      for (Eigen::Index i = 0; i < linear.size(); ++i) {
        out(i) = std::abs(linear(i)) < 1e-12 ? kNaN : 1.0 / linear(i) - fit.offset;
      }
      return out;
    }
    default:
      return linear;
  }
}

IntervalPrediction predict_interval(const LinearFit& fit, const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                                    double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0,1)");
  if (fit.method == LinearMethod::Reciprocal) {
    throw ArgumentError("reciprocal regression does not provide prediction intervals");
  }
  if (x_new.cols() != fit.coef.size()) throw ArgumentError("prediction columns do not match the fit");
  const Eigen::Index m = x_new.rows();
  const Eigen::VectorXd linear = x_new * fit.coef;
  const double t = t_quantile(Probability(1.0 - 0.5 * alpha), static_cast<double>(fit.df_residual));

  // Per-row noise variance relative to sigma^2.
  Eigen::VectorXd noise_scale = Eigen::VectorXd::Ones(m);
  if (fit.method == LinearMethod::Wls && fit.variance_coef.size() == x_new.cols()) {
    noise_scale = (x_new * fit.variance_coef).array().exp().matrix();
  } else if (fit.method == LinearMethod::Gls) {
    noise_scale = gls_weights(linear, fit.mean_floor, fit.power).cwiseInverse();
  }

  IntervalPrediction out{Eigen::VectorXd(m), Eigen::VectorXd(m), Eigen::VectorXd(m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    const double leverage = x_new.row(i) * fit.xtwx_inverse * x_new.row(i).transpose();
    const double half = t * std::sqrt(fit.sigma2 * (noise_scale(i) + leverage));
    const double centre = linear(i);
    if (fit.method == LinearMethod::Log) {
      out.fit(i) = std::exp(centre) * fit.smearing - fit.offset;
      out.lower(i) = std::exp(centre - half) - fit.offset;
      out.upper(i) = std::exp(centre + half) - fit.offset;
    } else {
      out.fit(i) = centre;
      out.lower(i) = centre - half;
      out.upper(i) = centre + half;
    }
  }
  return out;
}

BreuschPagan breusch_pagan(const Eigen::Ref<const Eigen::VectorXd>& y,
                           const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const LinearFit ols = fit_ols(y, x);
  const Eigen::VectorXd sq = ols.residuals.array().square().matrix();
  const Eigen::VectorXd fitted = x * solve_least_squares(x, sq).coef;
  BreuschPagan out;
  out.df = static_cast<int>(x.cols()) - 1;
  out.statistic = static_cast<double>(y.size()) * centred_r_squared(sq, fitted);
  out.p_value = out.df > 0 ? chi_square_sf(out.statistic, out.df) : 1.0;
  return out;
}

Eigen::VectorXd vif(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  std::vector<Eigen::Index> slopes;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (!(x.col(j).array() == 1.0).all()) slopes.push_back(j);
  }
  if (slopes.empty()) throw ArgumentError("VIF needs at least one non-intercept column");
  const Eigen::Index n = x.rows();
  Eigen::VectorXd out(static_cast<Eigen::Index>(slopes.size()));
  for (std::size_t s = 0; s < slopes.size(); ++s) {
    // Regress column j on the intercept and every other slope column.
    Eigen::MatrixXd others(n, static_cast<Eigen::Index>(slopes.size()));
    others.col(0).setOnes();
    Eigen::Index c = 1;
    for (std::size_t o = 0; o < slopes.size(); ++o) {
      if (o != s) others.col(c++) = x.col(slopes[o]);
    }
    const Eigen::VectorXd target = x.col(slopes[s]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
    const Eigen::VectorXd fitted = others * qr.solve(target);
    const double r2 = centred_r_squared(target, fitted);
    out(static_cast<Eigen::Index>(s)) =
        r2 >= 1.0 - 1e-12 ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - r2);
  }
  return out;
}

}  // namespace pbreg
