#include "equibench/mic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "equibench/error.hpp"
#include "equibench/stats.hpp"

namespace equibench {

std::vector<int> equipartition(VectorRef v, int bins) {
  const Index n = v.size();
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "equipartition needs at least one bin");
  const auto order = argsort(v);
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  int row = 0;
  Index row_size = 0;
  double desired = static_cast<double>(n) / bins;
  for (Index start = 0; start < n;) {
    Index stop = start + 1;
    while (stop < n && v[order[stop]] == v[order[start]]) ++stop;
    const Index group = stop - start;
    if (row_size != 0 && std::abs(static_cast<double>(row_size + group) - desired) >=
                              std::abs(static_cast<double>(row_size) - desired)) {
      ++row;
      row_size = 0;
      desired = static_cast<double>(n - start) / (bins - row);
    }
    for (Index k = start; k < stop; ++k) labels[static_cast<std::size_t>(order[k])] = row;
    row_size += group;
    start = stop;
  }
  return labels;
}

namespace {

// End offsets (in axis-sorted order) of the clumps.
std::vector<Index> clump_ends(VectorRef axis, const std::vector<Index>& order, std::span<const int> rows) {
  const Index n = axis.size();
  std::vector<Index> ends;
  int run_row = -1;  // row of the current pure run, -1 when the last group was mixed
  for (Index start = 0; start < n;) {
    Index stop = start + 1;
    while (stop < n && axis[order[stop]] == axis[order[start]]) ++stop;
    const int first = rows[static_cast<std::size_t>(order[start])];
    bool pure = true;
    for (Index k = start + 1; k < stop; ++k)
      if (rows[static_cast<std::size_t>(order[k])] != first) pure = false;
    if (pure && first == run_row) {
      ends.back() = stop;
    } else {
      ends.push_back(stop);
      run_row = pure ? first : -1;
    }
    start = stop;
  }
  return ends;
}

// Merges consecutive clumps into at most `limit` groups of nearly equal size.
std::vector<Index> superclump_ends(const std::vector<Index>& ends, Index n, int limit) {
  std::vector<Index> merged;
  Index group_size = 0;
  Index previous_end = 0;
  int group = 0;
  double desired = static_cast<double>(n) / limit;
  for (Index end : ends) {
    const Index size = end - previous_end;
    if (group_size != 0 && group < limit - 1 &&
        std::abs(static_cast<double>(group_size + size) - desired) >= std::abs(static_cast<double>(group_size) - desired)) {
      merged.push_back(previous_end);
      ++group;
      group_size = 0;
      desired = static_cast<double>(n - previous_end) / (limit - group);
    }
    group_size += size;
    previous_end = end;
  }
  merged.push_back(n);
  return merged;
}

}  // namespace

std::vector<double> optimize_axis(VectorRef axis, std::span<const int> rows, int row_count, int max_columns,
                                  int clump_factor) {
  const Index n = axis.size();
  if (static_cast<Index>(rows.size()) != n) throw Error(ErrorCode::InvalidArgument, "row labels differ in length");
  std::vector<double> best(static_cast<std::size_t>(std::max(max_columns, 1)) + 1, 0.0);
  if (max_columns < 2 || n == 0) return best;

  const auto order = argsort(axis);
  std::vector<Index> ends = clump_ends(axis, order, rows);
  const int limit = clump_factor * max_columns;
  if (static_cast<int>(ends.size()) > limit) ends = superclump_ends(ends, n, limit);
  const int groups = static_cast<int>(ends.size());

  // x log x for integer counts
  std::vector<double> xlogx(static_cast<std::size_t>(n) + 1, 0.0);
  for (Index c = 2; c <= n; ++c) xlogx[static_cast<std::size_t>(c)] = static_cast<double>(c) * std::log(static_cast<double>(c));

  // cumulative[t * row_count + r]: points of row r among the first t groups
  std::vector<int> cumulative(static_cast<std::size_t>(groups + 1) * row_count, 0);
  std::vector<int> row_totals(static_cast<std::size_t>(row_count), 0);
  Index position = 0;
  for (int t = 1; t <= groups; ++t) {
    std::copy_n(cumulative.begin() + static_cast<std::ptrdiff_t>(t - 1) * row_count, row_count,
                cumulative.begin() + static_cast<std::ptrdiff_t>(t) * row_count);
    for (; position < ends[static_cast<std::size_t>(t - 1)]; ++position) {
      const int r = rows[static_cast<std::size_t>(order[position])];
      ++cumulative[static_cast<std::size_t>(t) * row_count + r];
      ++row_totals[static_cast<std::size_t>(r)];
    }
  }
  std::vector<Index> offsets(static_cast<std::size_t>(groups) + 1, 0);
  for (int t = 1; t <= groups; ++t) offsets[static_cast<std::size_t>(t)] = ends[static_cast<std::size_t>(t - 1)];

  // Column score sum_r h(n_cr) - h(n_c) for the column spanning groups (s, t].
  auto column_score = [&](int s, int t) {
    const int* hi = cumulative.data() + static_cast<std::ptrdiff_t>(t) * row_count;
    const int* lo = cumulative.data() + static_cast<std::ptrdiff_t>(s) * row_count;
    double acc = 0.0;
    for (int r = 0; r < row_count; ++r) acc += xlogx[static_cast<std::size_t>(hi[r] - lo[r])];
    return acc - xlogx[static_cast<std::size_t>(offsets[static_cast<std::size_t>(t)] - offsets[static_cast<std::size_t>(s)])];
  };

  double row_term = 0.0;
  for (int total : row_totals) row_term += xlogx[static_cast<std::size_t>(total)];
  const double constant = xlogx[static_cast<std::size_t>(n)] - row_term;
  const double nd = static_cast<double>(n);

  constexpr double kMinusInf = -std::numeric_limits<double>::infinity();
  std::vector<double> previous(static_cast<std::size_t>(groups) + 1, kMinusInf);
  std::vector<double> current(static_cast<std::size_t>(groups) + 1, kMinusInf);
  for (int t = 1; t <= groups; ++t) previous[static_cast<std::size_t>(t)] = column_score(0, t);

  for (int columns = 2; columns <= max_columns; ++columns) {
    std::fill(current.begin(), current.end(), kMinusInf);
    for (int t = columns; t <= groups; ++t) {
      double value = kMinusInf;
      for (int s = columns - 1; s < t; ++s) value = std::max(value, previous[static_cast<std::size_t>(s)] + column_score(s, t));
      current[static_cast<std::size_t>(t)] = value;
    }
    const double with_exact = current[static_cast<std::size_t>(groups)];
    const double info = with_exact == kMinusInf ? 0.0 : std::max(0.0, (with_exact + constant) / nd);
    best[static_cast<std::size_t>(columns)] = std::max(best[static_cast<std::size_t>(columns) - 1], info);
    std::swap(previous, current);
  }
  return best;
}

Matrix mic_characteristic_matrix(VectorRef x, VectorRef y, int grid_bound, int clump_factor) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "x and y differ in length");
  if (grid_bound < 4) throw Error(ErrorCode::InvalidArgument, "grid bound must allow a 2 x 2 grid");
  const int half = grid_bound / 2;
  Matrix m = Matrix::Zero(half + 1, half + 1);
  for (int equi = 2; equi <= half; ++equi) {
    const int max_other = grid_bound / equi;
    if (max_other < 2) continue;
    const std::vector<int> y_rows = equipartition(y, equi);
    const std::vector<double> over_x = optimize_axis(x, y_rows, equi, max_other, clump_factor);
    const std::vector<int> x_cols = equipartition(x, equi);
    const std::vector<double> over_y = optimize_axis(y, x_cols, equi, max_other, clump_factor);
    for (int other = 2; other <= max_other; ++other) {
      const double norm = std::log(static_cast<double>(std::min(equi, other)));
      m(other, equi) = std::max(m(other, equi), over_x[static_cast<std::size_t>(other)] / norm);
      m(equi, other) = std::max(m(equi, other), over_y[static_cast<std::size_t>(other)] / norm);
    }
  }
  return m;
}

double mic(VectorRef x, VectorRef y, double alpha, int clump_factor) {
  const Index n = x.size();
  if (y.size() != n) throw Error(ErrorCode::InvalidArgument, "x and y differ in length");
  if (n < 8) throw Error(ErrorCode::InvalidArgument, "mic needs n >= 8");
  if (!(alpha > 0.0) || alpha > 1.0) throw Error(ErrorCode::InvalidArgument, "mic alpha must be in (0, 1]");
  const int bound = std::max(4, static_cast<int>(std::floor(std::pow(static_cast<double>(n), alpha))));
  return std::clamp(mic_characteristic_matrix(x, y, bound, clump_factor).maxCoeff(), 0.0, 1.0);
}

}  // namespace equibench
