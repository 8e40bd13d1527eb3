#pragma once

#include <cstdint>

#include "equibench/types.hpp"

namespace equibench {

/// Randomized dependence coefficient, in [0, 1].
///
/// Each axis is mapped to its empirical copula (mid-ranks / n), augmented with
/// a constant, and projected through k random sinusoidal features
/// sin(w * [u, 1]) with w ~ N(0, (s/2)^2). One projection matrix is drawn from
/// `seed` and shared by both axes, so the statistic is symmetric. Returns
/// the largest canonical correlation between the two feature sets; feature
/// directions with singular value below 1e-7 of the largest are truncated
/// (the features are nearly collinear for small s).
double rdc(VectorRef x, VectorRef y, int k = 20, double s = 1.0 / 6.0, std::uint64_t seed = 0);

/// Largest canonical correlation between the column spaces of a and b
/// (columns are centred internally).
double max_canonical_correlation(const Matrix& a, const Matrix& b, double rank_tolerance = 1e-7);

}  // namespace equibench
