#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "pbreg/betareg.hpp"
#include "pbreg/random.hpp"

namespace fixture {

struct BetaData {
  Eigen::VectorXd u;
  pbreg::RegressionSpec spec;
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;
};

// Beta-regression sample with X = [1, x1, x2], Z = [1, x1].
inline BetaData beta_regression(int n, std::uint64_t seed, const Eigen::Vector3d& beta = {0.3, 0.8, -0.5},
                                const Eigen::Vector2d& gamma = {2.0, 0.6}) {
  pbreg::Rng rng(seed);
  BetaData d;
  d.beta = beta;
  d.gamma = gamma;
  d.u.resize(n);
  d.spec.X.resize(n, 3);
  d.spec.Z.resize(n, 2);
  d.spec.mean_names = {"(Intercept)", "x1", "x2"};
  d.spec.precision_names = {"(Intercept)", "x1"};
  for (int i = 0; i < n; ++i) {
    const double x1 = rng.uniform(-1.0, 1.0);
    const double x2 = rng.normal();
    d.spec.X.row(i) << 1.0, x1, x2;
    d.spec.Z.row(i) << 1.0, x1;
    const double mu = 1.0 / (1.0 + std::exp(-d.spec.X.row(i).dot(beta)));
    const double phi = std::exp(d.spec.Z.row(i).dot(gamma));
    double u = rng.beta(mu * phi, (1.0 - mu) * phi);
    u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
    d.u(i) = u;
  }
  return d;
}

}  // namespace fixture
