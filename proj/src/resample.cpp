#include "pbreg/resample.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "pbreg/cdfbeta.hpp"
#include "pbreg/errors.hpp"
#include "pbreg/parallel.hpp"
#include "pbreg/random.hpp"

namespace pbreg {
namespace {

struct Replicate {
  Eigen::VectorXd theta;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

std::optional<Replicate> run_replicate(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionSpec& spec,
                                       const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                                       const Eigen::Ref<const Eigen::MatrixXd>& z_new,
                                       const BootstrapOptions& options, int b) {
  Rng rng(child_seed(options.seed, static_cast<std::uint64_t>(b)));
  const Eigen::Index n = y.size();
  Eigen::VectorXd y_star(n);
  RegressionSpec spec_star{Eigen::MatrixXd(n, spec.X.cols()), Eigen::MatrixXd(n, spec.Z.cols()),
                           spec.mean_names, spec.precision_names};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)));
    y_star(i) = y(row);
    spec_star.X.row(i) = spec.X.row(row);
    spec_star.Z.row(i) = spec.Z.row(row);
  }
  try {
    const CdfBetaModel model = fit_cdf_beta(y_star, spec_star, options.fit);
    if (!model.fit.converged) return std::nullopt;
    Replicate out;
    out.theta = model.fit.theta();
    if (x_new.rows() > 0) {
      const PredictionInterval pi = prediction_interval(model, x_new, z_new, options.alpha);
      out.lower = pi.lower;
      out.upper = pi.upper;
    }
    if (!out.theta.allFinite()) return std::nullopt;
    return out;
  } catch (const std::exception&) {
    // Degenerate resamples (constant y, rank-deficient designs) count as failures.
    return std::nullopt;
  }
}

}  // namespace

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ArgumentError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BootstrapResult bootstrap(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionSpec& spec,
                          const Eigen::Ref<const Eigen::MatrixXd>& x_new,
                          const Eigen::Ref<const Eigen::MatrixXd>& z_new, const BootstrapOptions& options) {
  if (options.replicates < 2) throw ArgumentError("bootstrap needs at least 2 replicates");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ArgumentError("alpha must lie in (0,1)");
  if (x_new.rows() != z_new.rows()) throw ArgumentError("prediction X and Z row counts differ");

  const CdfBetaModel base = fit_cdf_beta(y, spec, options.fit);
  if (x_new.rows() > 0) (void)predict_params(base.fit, x_new, z_new);  // dimension check

  const auto total = static_cast<std::size_t>(options.replicates);
  std::vector<std::optional<Replicate>> slots(total);
  parallel_for(total, options.workers, [&](std::size_t b) {
    slots[b] = run_replicate(y, spec, x_new, z_new, options, static_cast<int>(b));
  });

  BootstrapResult result;
  result.theta_hat = base.fit.theta();
  result.replicates = options.replicates;
  result.seed = options.seed;
  for (std::size_t b = 0; b < total; ++b) {
    if (slots[b]) result.replicate_index.push_back(static_cast<int>(b));
  }
  const auto ok = static_cast<Eigen::Index>(result.replicate_index.size());
  result.n_failed = options.replicates - static_cast<int>(ok);
  if (2 * result.n_failed > options.replicates) {
    throw BootstrapError(std::to_string(result.n_failed) + " of " + std::to_string(options.replicates) +
                         " bootstrap replicates failed");
  }

  const Eigen::Index k = result.theta_hat.size();
  const Eigen::Index m = x_new.rows();
  result.replicate_thetas.resize(ok, k);
  result.replicate_lower.resize(ok, m);
  result.replicate_upper.resize(ok, m);
  for (Eigen::Index r = 0; r < ok; ++r) {
    const Replicate& rep = *slots[static_cast<std::size_t>(result.replicate_index[static_cast<std::size_t>(r)])];
    result.replicate_thetas.row(r) = rep.theta.transpose();
    if (m > 0) {
      result.replicate_lower.row(r) = rep.lower.transpose();
      result.replicate_upper.row(r) = rep.upper.transpose();
    }
  }

  auto column = [](const Eigen::MatrixXd& mat, Eigen::Index j) {
    return std::vector<double>(mat.col(j).begin(), mat.col(j).end());
  };
  result.se_theta.resize(k);
  result.ci_lower.resize(k);
  result.ci_upper.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto values = result.replicate_thetas.col(j).array();
    result.se_theta(j) =
        ok > 1 ? std::sqrt((values - values.mean()).square().sum() / static_cast<double>(ok - 1)) : 0.0;
    const std::vector<double> v = column(result.replicate_thetas, j);
    result.ci_lower(j) = sample_quantile(v, 0.5 * options.alpha);
    result.ci_upper(j) = sample_quantile(v, 1.0 - 0.5 * options.alpha);
  }

  PredictionBands& bands = result.bands;
  for (Eigen::VectorXd* v : {&bands.lower_median, &bands.upper_median, &bands.lower_p025, &bands.lower_p975,
                             &bands.upper_p025, &bands.upper_p975}) {
    v->resize(m);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::vector<double> lo = column(result.replicate_lower, i);
    const std::vector<double> hi = column(result.replicate_upper, i);
    bands.lower_median(i) = sample_quantile(lo, 0.5);
    bands.upper_median(i) = sample_quantile(hi, 0.5);
    bands.lower_p025(i) = sample_quantile(lo, 0.025);
    bands.lower_p975(i) = sample_quantile(lo, 0.975);
    bands.upper_p025(i) = sample_quantile(hi, 0.025);
    bands.upper_p975(i) = sample_quantile(hi, 0.975);
  }
  return result;
}

}  // namespace pbreg
