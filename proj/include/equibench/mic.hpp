#pragma once

#include <span>
#include <vector>

#include "equibench/types.hpp"

namespace equibench {

/// Splits the points into `bins` groups of (nearly) equal size along v,
/// keeping tied values together. Returns a group label per point; fewer
/// than `bins` groups are used when ties force it.
std::vector<int> equipartition(VectorRef v, int bins);

/// Best mutual information (nats) between the fixed partition `rows` and a
/// partition of the points into contiguous groups along `axis`.
///
/// Returns a vector indexed by column count c in [0, max_columns]: entry c is
/// the best achievable with at most c columns (entries 0 and 1 are 0).
/// Boundaries are restricted to clump boundaries (maximal runs of points
/// that share a row), which loses nothing; when there are more than
/// clump_factor * max_columns clumps they are merged into that many
/// superclumps first, which is an approximation.
std::vector<double> optimize_axis(VectorRef axis, std::span<const int> rows, int row_count, int max_columns,
                                  int clump_factor = 15);

/// Characteristic matrix with entries M(a, b) for a x-bins and b y-bins,
/// a * b <= grid_bound: the larger of the two one-axis-equipartitioned
/// approximations, divided by log(min(a, b)). Entries outside the bound are 0.
Matrix mic_characteristic_matrix(VectorRef x, VectorRef y, int grid_bound, int clump_factor = 15);

/// Maximal information coefficient with grid bound floor(n^alpha), in [0, 1].
/// Requires n >= 8.
double mic(VectorRef x, VectorRef y, double alpha = 0.6, int clump_factor = 15);

}  // namespace equibench
