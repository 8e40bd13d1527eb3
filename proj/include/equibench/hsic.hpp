#pragma once

#include <span>

#include "equibench/types.hpp"

namespace equibench {

/// Median of the nonzero pairwise distances |v_i - v_j|. Throws
/// DegenerateInput when every distance is zero.
double median_pairwise_distance(VectorRef v);

/// K_ij = exp(-(v_i - v_j)^2 / (2 bandwidth^2)).
Matrix gaussian_gram(VectorRef v, double bandwidth);

/// H K H with H = I - 11'/n; every row and column sums to zero.
Matrix centered_gram(VectorRef v, double bandwidth);

/// Biased (V-statistic) HSIC with Gaussian kernels, bandwidth set per axis
/// to the median nonzero pairwise distance: tr(K H L H) / n^2, evaluated as
/// the elementwise inner product of the two centred Gram matrices so that
/// swapping the arguments gives a bit-identical result.
double hsic(VectorRef x, VectorRef y);

/// HSIC of (x, y[perm]) with both Gram matrices built once; each evaluation
/// is a gathered O(n^2) inner product with no kernel evaluations.
class HsicPermutationKernel {
 public:
  HsicPermutationKernel(VectorRef x, VectorRef y);
  double operator()(std::span<const Index> perm) const;

 private:
  Matrix centered_x_;
  Matrix centered_y_;
};

}  // namespace equibench
