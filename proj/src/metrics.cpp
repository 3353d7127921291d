#include "pbreg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pbreg/errors.hpp"

namespace pbreg {
namespace {

struct PooledEcdf {
  std::vector<double> grid;
  std::vector<double> first;
  std::vector<double> second;
};

std::vector<double> sorted_copy(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (!v.allFinite()) throw ArgumentError("distribution metrics need finite values");
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Both right-continuous ECDFs evaluated at every distinct pooled value.
PooledEcdf pooled_ecdf(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  const std::vector<double> sa = sorted_copy(a);
  const std::vector<double> sb = sorted_copy(b);
  PooledEcdf out;
  out.grid.reserve(sa.size() + sb.size());
  std::merge(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out.grid));
  out.grid.erase(std::unique(out.grid.begin(), out.grid.end()), out.grid.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  for (const double z : out.grid) {
    while (ia < sa.size() && sa[ia] <= z) ++ia;
    while (ib < sb.size() && sb[ib] <= z) ++ib;
    out.first.push_back(static_cast<double>(ia) / na);
    out.second.push_back(static_cast<double>(ib) / nb);
  }
  return out;
}

}  // namespace

double icdfe(const Eigen::Ref<const Eigen::VectorXd>& y_true, const Eigen::Ref<const Eigen::VectorXd>& y_pred) {
  if (y_true.size() != y_pred.size()) throw ArgumentError("ICDFE inputs differ in length");
  if (y_true.size() < 2) throw ArgumentError("ICDFE needs at least two points");
  const PooledEcdf e = pooled_ecdf(y_true, y_pred);
  const double range = e.grid.back() - e.grid.front();
  if (!(range > 0.0)) return 0.0;
  double integral = 0.0;
  for (std::size_t k = 1; k < e.grid.size(); ++k) {
    const double left = e.first[k - 1] - e.second[k - 1];
    const double right = e.first[k] - e.second[k];
    integral += 0.5 * (left * left + right * right) * (e.grid[k] - e.grid[k - 1]);
  }
  return integral / range;
}

double ks_distance(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() < 1 || b.size() < 1) throw ArgumentError("KS distance of an empty sample");
  const PooledEcdf e = pooled_ecdf(a, b);
  double d = 0.0;
  for (std::size_t k = 0; k < e.grid.size(); ++k) d = std::max(d, std::abs(e.first[k] - e.second[k]));
  return d;
}

double coverage(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& lower,
                const Eigen::Ref<const Eigen::VectorXd>& upper) {
  if (y.size() != lower.size() || y.size() != upper.size()) {
    throw ArgumentError("coverage inputs differ in length");
  }
  if (y.size() < 1) throw ArgumentError("coverage of an empty sample");
  Eigen::Index inside = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!(lower(i) <= upper(i))) throw ArgumentError("interval lower bound exceeds upper bound");
    if (lower(i) <= y(i) && y(i) <= upper(i)) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(y.size());
}

double rmse(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& y_hat) {
  if (y.size() != y_hat.size()) throw ArgumentError("RMSE inputs differ in length");
  if (y.size() < 1) throw ArgumentError("RMSE of an empty sample");
  return std::sqrt((y - y_hat).squaredNorm() / static_cast<double>(y.size()));
}

}  // namespace pbreg
