#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "equibench/error.hpp"
#include "equibench/types.hpp"

namespace equibench {

/// Unbiased sample variance (divisor n - 1).
template <typename Derived>
typename Derived::Scalar sample_variance(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Index n = v.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "variance needs at least two values");
  const Scalar mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<Scalar>(n - 1);
}

/// Average ranks (1-based); tied values share the mean of their positions.
Vector mid_ranks(VectorRef v);

/// Ranks where every member of a tie group gets the smallest position
/// (0-based). Used for binning so that ties never straddle a bin edge.
std::vector<Index> min_ranks(VectorRef v);

/// Stable ordering permutation of v (ascending).
std::vector<Index> argsort(VectorRef v);

double mean(std::span<const double> values);
/// Sample standard deviation with divisor n - 1; zero for fewer than two values.
double stddev(std::span<const double> values);

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// Central binomial interval on counts: [lo, hi] with P(X < lo) <= (1-level)/2
/// and P(X > hi) <= (1-level)/2 for X ~ Binomial(trials, p).
std::pair<std::size_t, std::size_t> binomial_central_interval(std::size_t trials, double p, double level = 0.95);

}  // namespace equibench
