#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "equibench/error.hpp"
#include "equibench/types.hpp"

namespace equibench {

/// Sample Pearson product-moment correlation. Accepts any pair of dense
/// vector expressions of equal length.
template <typename DerivedX, typename DerivedY>
double pearson(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "pearson needs two equal-length vectors of length >= 2");
  const auto xc = (x.array() - x.mean()).matrix().eval();
  const auto yc = (y.array() - y.mean()).matrix().eval();
  const double sxx = xc.squaredNorm();
  const double syy = yc.squaredNorm();
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorCode::DegenerateInput, "pearson input has zero variance");
  return std::clamp(xc.dot(yc) / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Pearson correlation of mid-ranks.
double spearman(VectorRef x, VectorRef y);

/// Kendall tau-b in O(n log n) (sort by (x, y), then count inversions of y
/// with a merge sort). Throws DegenerateInput when every pair is tied on
/// either axis.
double kendall(VectorRef x, VectorRef y);

}  // namespace equibench
