#include "equibench/distance_correlation.hpp"

#include <algorithm>
#include <cmath>

#include "equibench/error.hpp"
#include "equibench/stats.hpp"

namespace equibench {
namespace {

// Row means of |v_i - v_j|.
Vector distance_row_means(VectorRef v) {
  const Index n = v.size();
  const auto order = argsort(v);
  Vector sorted(n);
  for (Index k = 0; k < n; ++k) sorted[k] = v[order[k]];
  const double total = sorted.sum();
  Vector means(n);
  double prefix = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double value = sorted[k];
    const double below = static_cast<double>(k) * value - prefix;
    const double above = (total - prefix - value) - static_cast<double>(n - k - 1) * value;
    means[order[k]] = (below + above) / static_cast<double>(n);
    prefix += value;
  }
  return means;
}

}  // namespace

double distance_correlation(VectorRef x, VectorRef y) {
  const Index n = x.size();
  if (y.size() != n || n < 2)
    throw Error(ErrorCode::InvalidArgument, "distance correlation needs two equal-length vectors of length >= 2");

  const Vector ax = distance_row_means(x);
  const Vector by = distance_row_means(y);
  const double ax_grand = ax.mean();
  const double by_grand = by.mean();
  const double nd = static_cast<double>(n);

  double cross = 0.0;
  for (Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Index j = i + 1; j < n; ++j) row += std::abs(x[i] - x[j]) * std::abs(y[i] - y[j]);
    cross += row;
  }
  cross *= 2.0;

  const double xc = (x.array() - x.mean()).square().sum();
  const double yc = (y.array() - y.mean()).square().sum();
  const double ssx = 2.0 * nd * xc;  // sum_ij (x_i - x_j)^2
  const double ssy = 2.0 * nd * yc;

  const double dcov2 = cross - 2.0 * nd * ax.dot(by) + nd * nd * ax_grand * by_grand;
  const double dvarx = ssx - 2.0 * nd * ax.squaredNorm() + nd * nd * ax_grand * ax_grand;
  const double dvary = ssy - 2.0 * nd * by.squaredNorm() + nd * nd * by_grand * by_grand;
  if (!(dvarx > 0.0) || !(dvary > 0.0)) return 0.0;
  const double r2 = dcov2 / std::sqrt(dvarx * dvary);
  return std::clamp(std::sqrt(std::max(0.0, r2)), 0.0, 1.0);
}

}  // namespace equibench
