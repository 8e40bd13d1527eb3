#pragma once

#include "equibench/types.hpp"

namespace equibench {

/// Sample distance correlation (V-statistic form), in [0, 1].
///
/// Runs in O(n^2) time and O(n) memory: row means of the distance matrices
/// come from sorted prefix sums and the double-centred inner product is
/// expanded algebraically, so no n x n matrix is formed. A constant input
/// yields 0.
double distance_correlation(VectorRef x, VectorRef y);

}  // namespace equibench
