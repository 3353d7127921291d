#include "pbreg/empdist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pbreg/errors.hpp"

namespace pbreg {
namespace {

// Values of I_x below this are treated as exactly 0 (and 1 - I_x as exactly 1)
// so that only the O(sqrt(n)) informative weights are evaluated.
constexpr double kNegligibleTail = 1e-20;

struct WeightWindow {
  Eigen::Index first;  // 0-based index of the first stored weight
  Eigen::VectorXd weights;
};

WeightWindow hd_weight_window(Eigen::Index n, double p) {
  if (n < 1) throw SizeError("Harrell–Davis weights need n >= 1");
  const double a = static_cast<double>(n + 1) * p;
  const double b = static_cast<double>(n + 1) * (1.0 - p);
  const double dn = static_cast<double>(n);

  // lo: largest grid index whose lower tail is negligible (c = 0 up to lo).
  Eigen::Index lo = 0;
  {
    Eigen::Index left = 0;
    Eigen::Index right = n;
    while (right - left > 1) {
      const Eigen::Index mid = (left + right) / 2;
      if (beta_cdf(static_cast<double>(mid) / dn, a, b) < kNegligibleTail) {
        left = mid;
      } else {
        right = mid;
      }
    }
    lo = left;
  }
  // hi: smallest grid index whose upper tail is negligible (c = 1 from hi).
  Eigen::Index hi = n;
  {
    Eigen::Index left = lo;
    Eigen::Index right = n;
    while (right - left > 1) {
      const Eigen::Index mid = (left + right) / 2;
      if (beta_cdf(1.0 - static_cast<double>(mid) / dn, b, a) < kNegligibleTail) {
        right = mid;
      } else {
        left = mid;
      }
    }
    hi = right;
  }

  WeightWindow window{lo, Eigen::VectorXd(hi - lo)};
  double previous = 0.0;
  for (Eigen::Index i = lo + 1; i <= hi; ++i) {
    double current = (i == hi) ? 1.0 : beta_cdf(static_cast<double>(i) / dn, a, b);
    current = std::max(current, previous);
    window.weights(i - lo - 1) = current - previous;
    previous = current;
  }
  return window;
}

double fc_value_at_rank(double rank, Eigen::Index n) {
  const double dn = static_cast<double>(n);
  auto at_integer = [&](Eigen::Index i) {
    if (i <= 1) return 1.0 / dn;
    if (i >= n) return (dn - 1.0) / dn;
    return (2.0 * static_cast<double>(i) - 1.0) / (2.0 * dn);
  };
  const auto below = static_cast<Eigen::Index>(std::floor(rank));
  const double frac = rank - static_cast<double>(below);
  if (frac == 0.0) return at_integer(below);
  return (1.0 - frac) * at_integer(below) + frac * at_integer(below + 1);
}

}  // namespace

Eigen::VectorXd fc_hermite_cdf(const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::Index n = y.size();
  if (n < 3) throw SizeError("FC-Hermite CDF needs at least 3 observations");
  if (!y.allFinite()) throw DomainError("FC-Hermite CDF input contains non-finite values");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return y(l) < y(r); });

  Eigen::VectorXd u(n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start;
    while (end + 1 < n && y(order[end + 1]) == y(order[start])) ++end;
    // 1-based ranks start+1 .. end+1 share their mean.
    const double rank = 0.5 * static_cast<double>(start + end) + 1.0;
    const double value = fc_value_at_rank(rank, n);
    for (Eigen::Index k = start; k <= end; ++k) u(order[k]) = value;
    start = end + 1;
  }
  return u;
}

Eigen::VectorXd hd_weights(Eigen::Index n, Probability p) {
  const WeightWindow window = hd_weight_window(n, p.value());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w.segment(window.first, window.weights.size()) = window.weights;
  return w;
}

double hd_quantile(const Eigen::Ref<const Eigen::VectorXd>& sorted, Probability p) {
  if (sorted.size() < 1) throw SizeError("quantile of an empty sample");
  const WeightWindow window = hd_weight_window(sorted.size(), p.value());
  return window.weights.dot(sorted.segment(window.first, window.weights.size()));
}

QuantileFunction::QuantileFunction(std::shared_ptr<const Eigen::VectorXd> sorted)
    : sorted_(std::move(sorted)) {
  if (!sorted_ || sorted_->size() < 1) throw SizeError("quantile function of an empty sample");
}

double QuantileFunction::operator()(double p) const { return hd_quantile(*sorted_, Probability(p)); }

Eigen::VectorXd QuantileFunction::operator()(const Eigen::Ref<const Eigen::VectorXd>& ps) const {
  Eigen::VectorXd q(ps.size());
  for (Eigen::Index i = 0; i < ps.size(); ++i) q(i) = (*this)(ps(i));
  return q;
}

EmpiricalDistribution::EmpiricalDistribution(const Eigen::Ref<const Eigen::VectorXd>& y)
    : cdf_at_data_(fc_hermite_cdf(y)) {
  auto sorted = std::make_shared<Eigen::VectorXd>(y);
  std::sort(sorted->begin(), sorted->end());
  sorted_ = std::move(sorted);
}

double EmpiricalDistribution::quantile(double p) const {
  return hd_quantile(*sorted_, Probability(p));
}

double hd_quantile(const EmpiricalDistribution& dist, Probability p) {
  return dist.quantile(p.value());
}

QuantileFunction quantile_fn(const EmpiricalDistribution& dist) {
  return dist.quantile_function();
}

Eigen::VectorXd quantile_derivative(const EmpiricalDistribution& dist,
                                    const Eigen::Ref<const Eigen::VectorXd>& p_grid) {
  const Eigen::Index m = p_grid.size();
  if (m < 2) throw ArgumentError("quantile derivative grid needs at least 2 points");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(p_grid(i) > 0.0 && p_grid(i) < 1.0)) {
      throw ArgumentError("quantile derivative grid points must lie in (0,1)");
    }
    if (i > 0 && !(p_grid(i) > p_grid(i - 1))) {
      throw ArgumentError("quantile derivative grid must be strictly increasing");
    }
  }
  const Eigen::VectorXd q = dist.quantile_function()(p_grid);
  Eigen::VectorXd dq(m);
  dq(0) = (q(1) - q(0)) / (p_grid(1) - p_grid(0));
  dq(m - 1) = (q(m - 1) - q(m - 2)) / (p_grid(m - 1) - p_grid(m - 2));
  for (Eigen::Index i = 1; i + 1 < m; ++i) {
    dq(i) = (q(i + 1) - q(i - 1)) / (p_grid(i + 1) - p_grid(i - 1));
  }
  return dq.cwiseMax(0.0);
}

}  // namespace pbreg
