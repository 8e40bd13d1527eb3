#include "equibench/hhg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "equibench/error.hpp"

namespace equibench {
namespace {

class Fenwick {
 public:
  explicit Fenwick(std::size_t size) : tree_(size + 1, 0) {}
  void clear() { std::fill(tree_.begin(), tree_.end(), 0); }
  void add(std::size_t index) {
    for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  // Number of inserted indices <= index.
  std::int32_t prefix(std::size_t index) const {
    std::int32_t total = 0;
    for (std::size_t i = index + 1; i > 0; i -= i & (~i + 1)) total += tree_[i];
    return total;
  }

 private:
  std::vector<std::int32_t> tree_;
};

double table_chi_square(double a11, double row1, double col1, double total) {
  const double row2 = total - row1;
  const double col2 = total - col1;
  if (row1 <= 0.0 || row2 <= 0.0 || col1 <= 0.0 || col2 <= 0.0) return 0.0;
  const double a12 = row1 - a11;
  const double a21 = col1 - a11;
  const double a22 = total - row1 - col1 + a11;
  // Integer-valued operands are exact; the grouping below is symmetric in
  // (row, col) so swapping x and y reproduces the value bit for bit.
  const double det = a11 * a22 - a12 * a21;
  return total * det * det / ((row1 * row2) * (col1 * col2));
}

}  // namespace

HhgKernel::HhgKernel(VectorRef x, VectorRef y, Index cap) : n_(x.size()) {
  if (y.size() != n_) throw Error(ErrorCode::InvalidArgument, "x and y differ in length");
  if (n_ < 4) throw Error(ErrorCode::InvalidArgument, "hhg needs n >= 4");
  if (n_ > cap)
    throw Error(ErrorCode::SizeCap,
                "hhg limited to n <= " + std::to_string(cap) + " (got " + std::to_string(n_) + "); subsample first");

  const auto n = static_cast<std::size_t>(n_);
  x_order_.resize(n * n);
  x_le_.resize(n * n);
  y_rank_.resize(n * n);
  y_le_.resize(n * n);

  std::vector<double> dist(n);
  std::vector<std::int32_t> order(n);
  for (std::size_t m = 0; m < n; ++m) {
    // x: ordering by distance from x_m
    for (std::size_t k = 0; k < n; ++k) dist[k] = std::abs(x[static_cast<Index>(m)] - x[static_cast<Index>(k)]);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) { return dist[a] < dist[b]; });
    std::int32_t* row_order = x_order_.data() + m * n;
    std::int32_t* row_le = x_le_.data() + m * n;
    for (std::size_t start = 0; start < n;) {
      std::size_t stop = start + 1;
      while (stop < n && dist[order[stop]] == dist[order[start]]) ++stop;
      for (std::size_t p = start; p < stop; ++p) {
        row_order[p] = order[p];
        row_le[p] = static_cast<std::int32_t>(stop);
      }
      start = stop;
    }

    // y: dense rank and count <= of distance from y_m, indexed by point
    for (std::size_t k = 0; k < n; ++k) dist[k] = std::abs(y[static_cast<Index>(m)] - y[static_cast<Index>(k)]);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) { return dist[a] < dist[b]; });
    std::int32_t* rank_row = y_rank_.data() + m * n;
    std::int32_t* le_row = y_le_.data() + m * n;
    std::int32_t dense = 0;
    for (std::size_t start = 0; start < n; ++dense) {
      std::size_t stop = start + 1;
      while (stop < n && dist[order[stop]] == dist[order[start]]) ++stop;
      for (std::size_t p = start; p < stop; ++p) {
        rank_row[order[p]] = dense;
        le_row[order[p]] = static_cast<std::int32_t>(stop);
      }
      start = stop;
    }
  }
}

double HhgKernel::operator()() const {
  std::vector<Index> identity(static_cast<std::size_t>(n_));
  std::iota(identity.begin(), identity.end(), Index{0});
  return (*this)(identity);
}

double HhgKernel::operator()(std::span<const Index> perm) const {
  const auto n = static_cast<std::size_t>(n_);
  const double total = static_cast<double>(n_ - 2);
  Fenwick fenwick(n);
  std::vector<double> contribution(n);
  double statistic = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fenwick.clear();
    std::fill(contribution.begin(), contribution.end(), 0.0);
    const std::int32_t* row_order = x_order_.data() + i * n;
    const std::int32_t* row_le = x_le_.data() + i * n;
    const auto yi = static_cast<std::size_t>(perm[i]);
    const std::int32_t* rank_row = y_rank_.data() + yi * n;
    const std::int32_t* le_row = y_le_.data() + yi * n;
    for (std::size_t start = 0; start < n;) {
      const auto stop = static_cast<std::size_t>(row_le[start]);
      for (std::size_t p = start; p < stop; ++p) {
        const auto k = static_cast<std::size_t>(perm[static_cast<std::size_t>(row_order[p])]);
        fenwick.add(static_cast<std::size_t>(rank_row[k]));
      }
      for (std::size_t p = start; p < stop; ++p) {
        const auto j = static_cast<std::size_t>(row_order[p]);
        if (j == i) continue;
        const auto yj = static_cast<std::size_t>(perm[j]);
        // i and j always satisfy both inequalities; remove them.
        const double both = fenwick.prefix(static_cast<std::size_t>(rank_row[yj])) - 2.0;
        const double row1 = static_cast<double>(stop) - 2.0;
        const double col1 = static_cast<double>(le_row[yj]) - 2.0;
        contribution[j] = table_chi_square(both, row1, col1, total);
      }
      start = stop;
    }
    // Summed in index order, independent of the distance ordering.
    for (double c : contribution) statistic += c;
  }
  return statistic;
}

double hhg(VectorRef x, VectorRef y, Index cap) { return HhgKernel(x, y, cap)(); }

}  // namespace equibench
