#include "pbreg/betareg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pbreg/errors.hpp"

namespace pbreg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Index column_rank(const Eigen::MatrixXd& m) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  return qr.rank();
}

bool is_intercept(const Eigen::MatrixXd& m, Eigen::Index col) {
  return m.rows() > 0 && (m.col(col).array() == 1.0).all();
}

// Linear map T with design*T centred and scaled; coefficients map back as
// theta = T * theta_tilde.
Eigen::MatrixXd standardising_map(const Eigen::MatrixXd& design) {
  const Eigen::Index k = design.cols();
  const double n = static_cast<double>(design.rows());
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(k, k);
  Eigen::Index intercept = -1;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (is_intercept(design, j)) {
      intercept = j;
      break;
    }
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (j == intercept) continue;
    const auto col = design.col(j).array();
    if (intercept >= 0) {
      const double mean = col.mean();
      const double sd = std::sqrt((col - mean).square().sum() / n);
      if (sd > 0.0) {
        t(j, j) = 1.0 / sd;
        t(intercept, j) = -mean / sd;
      }
    } else {
      const double rms = std::sqrt(col.square().sum() / n);
      if (rms > 0.0) t(j, j) = 1.0 / rms;
    }
  }
  return t;
}

// Log-likelihood and score on fixed data. All per-observation logs of U are
// computed once.
class Likelihood {
 public:
  Likelihood(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::MatrixXd& x,
             const Eigen::MatrixXd& z)
      : x_(x), z_(z), log_u_(u.array().log()), log_1mu_((-u.array()).log1p()) {}

  Eigen::Index mean_size() const { return x_.cols(); }
  Eigen::Index size() const { return x_.cols() + z_.cols(); }

  // Returns -inf when the parameters push a shape to 0 or overflow.
  double value(const Eigen::VectorXd& theta) const {
    const Eigen::ArrayXd eta = x_ * theta.head(x_.cols());
    const Eigen::ArrayXd zeta = z_ * theta.tail(z_.cols());
    double total = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double phi = std::exp(zeta(i));
      const double mu = 1.0 / (1.0 + std::exp(-eta(i)));
      const double one_minus_mu = 1.0 / (1.0 + std::exp(eta(i)));
      const double a = mu * phi;
      const double b = one_minus_mu * phi;
      if (!(a > 0.0 && b > 0.0) || !std::isfinite(phi)) return -kInf;
      total += ln_gamma(phi) - ln_gamma(a) - ln_gamma(b) + (a - 1.0) * log_u_(i) +
               (b - 1.0) * log_1mu_(i);
    }
    return std::isfinite(total) ? total : -kInf;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const {
    const Eigen::ArrayXd eta = x_ * theta.head(x_.cols());
    const Eigen::ArrayXd zeta = z_ * theta.tail(z_.cols());
    const Eigen::Index n = eta.size();
    Eigen::VectorXd d_eta(n);
    Eigen::VectorXd d_zeta(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double phi = std::exp(zeta(i));
      const double mu = 1.0 / (1.0 + std::exp(-eta(i)));
      const double one_minus_mu = 1.0 / (1.0 + std::exp(eta(i)));
      const double psi_a = digamma(mu * phi);
      const double psi_b = digamma(one_minus_mu * phi);
      const double resid = (log_u_(i) - log_1mu_(i)) - (psi_a - psi_b);  // u* - mu*
      d_eta(i) = phi * resid * mu * one_minus_mu;
      d_zeta(i) = phi * (mu * resid + log_1mu_(i) - psi_b + digamma(phi));
    }
    Eigen::VectorXd g(size());
    g.head(x_.cols()) = x_.transpose() * d_eta;
    g.tail(z_.cols()) = z_.transpose() * d_zeta;
    return g;
  }

 private:
  const Eigen::MatrixXd& x_;
  const Eigen::MatrixXd& z_;
  Eigen::ArrayXd log_u_;
  Eigen::ArrayXd log_1mu_;
};

void check_response(const Eigen::Ref<const Eigen::VectorXd>& u, const RegressionSpec& spec) {
  if (u.size() != spec.rows()) {
    throw ArgumentError("response length " + std::to_string(u.size()) +
                        " does not match design rows " + std::to_string(spec.rows()));
  }
  if (!((u.array() > 0.0).all() && (u.array() < 1.0).all())) {
    throw DomainError("beta regression response must lie strictly inside (0,1)");
  }
}

Eigen::VectorXd stack(const Eigen::Ref<const Eigen::VectorXd>& beta,
                      const Eigen::Ref<const Eigen::VectorXd>& gamma) {
  Eigen::VectorXd theta(beta.size() + gamma.size());
  theta << beta, gamma;
  return theta;
}

void check_coefficients(const Eigen::Ref<const Eigen::VectorXd>& beta,
                        const Eigen::Ref<const Eigen::VectorXd>& gamma, const RegressionSpec& spec) {
  if (beta.size() != spec.mean_size() || gamma.size() != spec.precision_size()) {
    throw ArgumentError("coefficient lengths do not match the design matrices");
  }
  if (spec.X.rows() != spec.Z.rows()) throw ArgumentError("X and Z row counts differ");
}

Eigen::MatrixXd numeric_hessian(const Likelihood& lik, const Eigen::VectorXd& theta) {
  const Eigen::Index k = theta.size();
  Eigen::MatrixXd h(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double step = 1e-5 * std::max(1.0, std::abs(theta(j)));
    Eigen::VectorXd up = theta;
    Eigen::VectorXd down = theta;
    up(j) += step;
    down(j) -= step;
    h.col(j) = (lik.gradient(up) - lik.gradient(down)) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

}  // namespace

BetaParams BetaParams::make(double mu, double phi) {
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("beta mean must lie in (0,1)");
  if (!(phi > 0.0) || !std::isfinite(phi)) throw DomainError("beta precision must be positive");
  return BetaParams{mu, phi};
}

Eigen::VectorXd BetaFit::theta() const { return stack(beta, gamma); }

void RegressionSpec::validate() const {
  if (X.rows() != Z.rows()) throw ArgumentError("X and Z row counts differ");
  if (X.cols() < 1 || Z.cols() < 1) throw ArgumentError("design matrices need at least one column");
  if (X.rows() < X.cols() + Z.cols()) {
    throw ArgumentError("need at least p + q observations for beta regression");
  }
  if (!mean_names.empty() && static_cast<Eigen::Index>(mean_names.size()) != X.cols()) {
    throw ArgumentError("mean-model column names do not match X");
  }
  if (!precision_names.empty() && static_cast<Eigen::Index>(precision_names.size()) != Z.cols()) {
    throw ArgumentError("precision-model column names do not match Z");
  }
  if (!X.allFinite() || !Z.allFinite()) throw ArgumentError("design matrices contain non-finite values");
  if (column_rank(X) < X.cols()) throw ArgumentError("mean-model design is rank deficient");
  if (column_rank(Z) < Z.cols()) throw ArgumentError("precision-model design is rank deficient");
}

double beta_logpdf(double u, BetaParams params) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("beta density argument must lie in (0,1)");
  const double a = params.shape_a();
  const double b = params.shape_b();
  return ln_gamma(params.phi) - ln_gamma(a) - ln_gamma(b) + (a - 1.0) * std::log(u) +
         (b - 1.0) * std::log1p(-u);
}

double beta_loglik(const Eigen::Ref<const Eigen::VectorXd>& beta,
                   const Eigen::Ref<const Eigen::VectorXd>& gamma,
                   const Eigen::Ref<const Eigen::VectorXd>& u, const RegressionSpec& spec) {
  check_coefficients(beta, gamma, spec);
  check_response(u, spec);
  const Eigen::VectorXd eta = spec.X * beta;
  const Eigen::VectorXd zeta = spec.Z * gamma;
  if (!eta.allFinite() || !zeta.allFinite()) throw NumericError("non-finite linear predictor");
  const double value = Likelihood(u, spec.X, spec.Z).value(stack(beta, gamma));
  if (!std::isfinite(value)) throw NumericError("log-likelihood is not finite");
  return value;
}

Eigen::VectorXd beta_score(const Eigen::Ref<const Eigen::VectorXd>& beta,
                           const Eigen::Ref<const Eigen::VectorXd>& gamma,
                           const Eigen::Ref<const Eigen::VectorXd>& u, const RegressionSpec& spec) {
  check_coefficients(beta, gamma, spec);
  check_response(u, spec);
  const Eigen::VectorXd g = Likelihood(u, spec.X, spec.Z).gradient(stack(beta, gamma));
  if (!g.allFinite()) throw NumericError("score is not finite");
  return g;
}

Eigen::VectorXd initial_theta(const Eigen::Ref<const Eigen::VectorXd>& u,
                              const RegressionSpec& spec) {
  const Eigen::VectorXd target = logit(u.array()).matrix();
  const Eigen::VectorXd beta = spec.X.colPivHouseholderQr().solve(target);
  const Eigen::ArrayXd mu = inverse_logit((spec.X * beta).array());
  const Eigen::ArrayXd resid = u.array() - mu;
  const double n = static_cast<double>(u.size());
  const double var = (resid - resid.mean()).square().sum() / std::max(1.0, n - 1.0);
  double phi0 = (mu * (1.0 - mu)).mean() / var - 1.0;
  if (!(phi0 >= 0.1) || !std::isfinite(phi0)) phi0 = std::isfinite(phi0) ? 0.1 : 1.0;

  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(spec.Z.cols());
  for (Eigen::Index j = 0; j < spec.Z.cols(); ++j) {
    if (is_intercept(spec.Z, j)) {
      gamma(j) = std::log(phi0);
      break;
    }
  }
  return stack(beta, gamma);
}

BetaFit fit_beta(const Eigen::Ref<const Eigen::VectorXd>& u, const RegressionSpec& spec,
                 const FitOptions& options) {
  spec.validate();
  check_response(u, spec);
  const Eigen::Index p = spec.mean_size();
  const Eigen::Index q = spec.precision_size();
  const Eigen::Index k = p + q;

  // Standardised coordinates: theta = T * theta_tilde.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  t.topLeftCorner(p, p) = standardising_map(spec.X);
  t.bottomRightCorner(q, q) = standardising_map(spec.Z);
  const Eigen::MatrixXd x_std = spec.X * t.topLeftCorner(p, p);
  const Eigen::MatrixXd z_std = spec.Z * t.bottomRightCorner(q, q);
  const Eigen::MatrixXd t_inv = t.inverse();
  const Eigen::MatrixXd t_inv_transpose = t_inv.transpose();
  const Likelihood lik(u, x_std, z_std);

  // Minimise f = -loglik.
  auto objective = [&](const Eigen::VectorXd& th) { return -lik.value(th); };
  auto gradient = [&](const Eigen::VectorXd& th) -> Eigen::VectorXd { return -lik.gradient(th); };
  auto original_grad_norm = [&](const Eigen::VectorXd& g_tilde) {
    return (t_inv_transpose * g_tilde).lpNorm<Eigen::Infinity>();
  };

  Eigen::VectorXd theta = t_inv * initial_theta(u, spec);
  double f = objective(theta);
  if (!std::isfinite(f)) {
    theta.setZero();
    f = objective(theta);
  }
  Eigen::VectorXd g = gradient(theta);

  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(k, k);
  {
    const Eigen::MatrixXd hess = -numeric_hessian(lik, theta);
    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    if (llt.info() == Eigen::Success) {
      h_inv = llt.solve(Eigen::MatrixXd::Identity(k, k));
    } else {
      h_inv /= std::max(1.0, g.lpNorm<Eigen::Infinity>());
    }
  }

  BetaFit out;
  int iter = 0;
  bool converged = original_grad_norm(g) < options.gradient_tolerance;
  constexpr double kArmijo = 1e-4;
  while (!converged && iter < options.max_iterations) {
    ++iter;
    Eigen::VectorXd direction = -h_inv * g;
    double slope = g.dot(direction);
    if (!(slope < 0.0)) {
      h_inv = Eigen::MatrixXd::Identity(k, k) / std::max(1.0, g.norm());
      direction = -h_inv * g;
      slope = g.dot(direction);
    }
    // Backtracking; a roundoff-sized slack lets the final Newton-like steps
    // through when f is flat to machine precision.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(f);
    double step = 1.0;
    Eigen::VectorXd candidate;
    double f_candidate = kInf;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      candidate = theta + step * direction;
      f_candidate = objective(candidate);
      if (std::isfinite(f_candidate) && f_candidate <= f + kArmijo * step * slope + slack) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd g_candidate = gradient(candidate);
    const Eigen::VectorXd s = candidate - theta;
    const Eigen::VectorXd y = g_candidate - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);
      h_inv = (eye - rho * s * y.transpose()) * h_inv * (eye - rho * y * s.transpose()) +
              rho * s * s.transpose();
    }
    theta = candidate;
    f = f_candidate;
    g = g_candidate;
    converged = original_grad_norm(g) < options.gradient_tolerance;
  }

  const Eigen::VectorXd theta_orig = t * theta;
  out.beta = theta_orig.head(p);
  out.gamma = theta_orig.tail(q);
  out.loglik = -f;
  out.converged = converged;
  out.iterations = iter;

  const Eigen::MatrixXd info = -numeric_hessian(lik, theta);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() && (ldlt.vectorD().array() > 0.0).all()) {
    out.covariance = t * ldlt.solve(Eigen::MatrixXd::Identity(k, k)) * t.transpose();
    const Eigen::VectorXd se = out.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    out.se_beta = se.head(p);
    out.se_gamma = se.tail(q);
  } else {
    out.covariance = Eigen::MatrixXd::Constant(k, k, nan);
    out.se_beta = Eigen::VectorXd::Constant(p, nan);
    out.se_gamma = Eigen::VectorXd::Constant(q, nan);
  }

  const Eigen::ArrayXd eta = (spec.X * out.beta).array();
  const Eigen::ArrayXd target = logit(u.array());
  const double n = static_cast<double>(u.size());
  const Eigen::ArrayXd ec = eta - eta.sum() / n;
  const Eigen::ArrayXd tc = target - target.sum() / n;
  const double denom = ec.square().sum() * tc.square().sum();
  out.pseudo_r2 = denom > 0.0 ? std::pow((ec * tc).sum(), 2) / denom : 0.0;
  return out;
}

std::vector<BetaParams> predict_params(const BetaFit& fit, const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                                       const Eigen::Ref<const Eigen::MatrixXd>& z_new) {
  if (x_new.cols() != fit.beta.size() || z_new.cols() != fit.gamma.size()) {
    throw ArgumentError("prediction design columns do not match the fitted model");
  }
  if (x_new.rows() != z_new.rows()) throw ArgumentError("prediction X and Z row counts differ");
  const Eigen::VectorXd eta = x_new * fit.beta;
  const Eigen::VectorXd zeta = z_new * fit.gamma;
  std::vector<BetaParams> out;
  out.reserve(static_cast<std::size_t>(eta.size()));
  constexpr double kEdge = 1e-15;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    double mu = 1.0 / (1.0 + std::exp(-eta(i)));
    mu = std::clamp(mu, kEdge, 1.0 - kEdge);
    const double phi = std::min(std::exp(zeta(i)), std::numeric_limits<double>::max());
    out.push_back(BetaParams::make(mu, std::max(phi, std::numeric_limits<double>::min())));
  }
  return out;
}

}  // namespace pbreg
