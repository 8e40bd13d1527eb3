#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "equibench/types.hpp"

namespace equibench {

inline constexpr Index kDefaultHhgCap = 512;

/// Pairwise-distance independence statistic: for every ordered pair (i, j),
/// i != j, the remaining n - 2 points are split by d(x_i, x_k) <= d(x_i, x_j)
/// and d(y_i, y_k) <= d(y_i, y_j) into a 2 x 2 table whose Pearson
/// chi-square is accumulated (tables with an empty margin are skipped).
///
/// Per-point distance orderings are precomputed once, so evaluating the
/// statistic on (x, y[perm]) costs O(n^2 log n) with no sorting. Memory is
/// O(n^2); n is capped (SizeCap error) to keep that bounded.
class HhgKernel {
 public:
  HhgKernel(VectorRef x, VectorRef y, Index cap = kDefaultHhgCap);

  double operator()(std::span<const Index> perm) const;
  double operator()() const;

  Index size() const noexcept { return n_; }

 private:
  Index n_;
  // Row i lists the points ordered by |x_i - x_k|; x_le_ holds, per
  // position, the number of points at distance <= that entry's distance.
  std::vector<std::int32_t> x_order_;
  std::vector<std::int32_t> x_le_;
  // Entry (m, l): dense rank of |y_m - y_l| among row m, and count <=.
  std::vector<std::int32_t> y_rank_;
  std::vector<std::int32_t> y_le_;
};

double hhg(VectorRef x, VectorRef y, Index cap = kDefaultHhgCap);

}  // namespace equibench
