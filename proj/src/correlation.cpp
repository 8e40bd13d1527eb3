#include "equibench/correlation.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

#include "equibench/stats.hpp"

namespace equibench {

double spearman(VectorRef x, VectorRef y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "spearman needs two equal-length vectors of length >= 2");
  return pearson(mid_ranks(x), mid_ranks(y));
}

namespace {

// Sorts v ascending and returns the number of strict inversions.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, scratch, lo, mid) + merge_count(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

std::int64_t tied_pairs(std::int64_t run) { return run * (run - 1) / 2; }

}  // namespace

double kendall(VectorRef x, VectorRef y) {
  const Index n = x.size();
  if (y.size() != n || n < 2)
    throw Error(ErrorCode::InvalidArgument, "kendall needs two equal-length vectors of length >= 2");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  std::int64_t x_ties = 0, joint_ties = 0;
  for (Index start = 0; start < n;) {
    Index stop = start + 1;
    while (stop < n && x[order[stop]] == x[order[start]]) ++stop;
    x_ties += tied_pairs(stop - start);
    for (Index s = start; s < stop;) {
      Index t = s + 1;
      while (t < stop && y[order[t]] == y[order[s]]) ++t;
      joint_ties += tied_pairs(t - s);
      s = t;
    }
    start = stop;
  }

  std::vector<double> ys(static_cast<std::size_t>(n)), scratch(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ys[static_cast<std::size_t>(i)] = y[order[i]];
  const std::int64_t swaps = merge_count(ys, scratch, 0, ys.size());

  std::int64_t y_ties = 0;
  for (std::size_t start = 0; start < ys.size();) {
    std::size_t stop = start + 1;
    while (stop < ys.size() && ys[stop] == ys[start]) ++stop;
    y_ties += tied_pairs(static_cast<std::int64_t>(stop - start));
    start = stop;
  }

  const std::int64_t total = tied_pairs(n);
  if (total == x_ties || total == y_ties)
    throw Error(ErrorCode::DegenerateInput, "kendall input is constant on one axis");
  const double numerator = static_cast<double>(total - x_ties - y_ties + joint_ties - 2 * swaps);
  // One rounding: the product of the pair counts is exact below 2^53.
  const double denominator = std::sqrt(static_cast<double>(total - x_ties) * static_cast<double>(total - y_ties));
  return std::clamp(numerator / denominator, -1.0, 1.0);
}

}  // namespace equibench
