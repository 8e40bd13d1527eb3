#include "equibench/mutual_information.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "equibench/error.hpp"
#include "equibench/stats.hpp"

namespace equibench {
namespace {

// Strict ranks 0..n-1 ordered by (primary, secondary); identical pairs keep
// index order, which cannot change the resulting point set.
std::vector<int> lexicographic_ranks(VectorRef primary, VectorRef secondary) {
  const Index n = primary.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return primary[a] < primary[b] || (primary[a] == primary[b] && secondary[a] < secondary[b]);
  });
  std::vector<int> ranks(static_cast<std::size_t>(n));
  for (Index r = 0; r < n; ++r) ranks[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
  return ranks;
}

// digamma at positive integers: psi(m) = -gamma + sum_{j<m} 1/j.
std::vector<double> digamma_table(std::size_t up_to) {
  std::vector<double> psi(up_to + 1, 0.0);
  if (up_to >= 1) psi[1] = -0.57721566490153286061;
  for (std::size_t m = 2; m <= up_to; ++m) psi[m] = psi[m - 1] + 1.0 / static_cast<double>(m - 1);
  return psi;
}

// Neighbours strictly within `radius` ranks on one axis, excluding self.
int marginal_count(int rank, int radius, int n) {
  const int lo = std::max(0, rank - radius + 1);
  const int hi = std::min(n - 1, rank + radius - 1);
  return hi - lo;
}

}  // namespace

double mutual_information(VectorRef x, VectorRef y, int k) {
  const Index n_index = x.size();
  if (y.size() != n_index) throw Error(ErrorCode::InvalidArgument, "x and y differ in length");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "neighbour count k must be >= 1");
  if (n_index <= k + 1) throw Error(ErrorCode::InvalidArgument, "mutual information needs n > k + 1");
  const int n = static_cast<int>(n_index);

  const std::vector<int> rx = lexicographic_ranks(x, y);
  const std::vector<int> ry = lexicographic_ranks(y, x);
  std::vector<int> by_x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) by_x[static_cast<std::size_t>(rx[static_cast<std::size_t>(i)])] = i;

  const std::vector<double> psi = digamma_table(static_cast<std::size_t>(n) + 1);
  std::vector<int> heap;  // max-heap of the k smallest max-norm distances seen so far
  heap.reserve(static_cast<std::size_t>(k));

  // Per-point terms are summed in input order, which keeps the estimate
  // exactly symmetric in (x, y).
  std::vector<double> marginal(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    const int i = by_x[static_cast<std::size_t>(r)];
    const int yi = ry[static_cast<std::size_t>(i)];
    heap.clear();
    auto offer = [&](int pos, int dx) {
      const int j = by_x[static_cast<std::size_t>(pos)];
      const int dist = std::max(dx, std::abs(ry[static_cast<std::size_t>(j)] - yi));
      if (static_cast<int>(heap.size()) < k) {
        heap.push_back(dist);
        std::push_heap(heap.begin(), heap.end());
      } else if (dist < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = dist;
        std::push_heap(heap.begin(), heap.end());
      }
    };
    for (int d = 1; d < n; ++d) {
      if (static_cast<int>(heap.size()) == k && d >= heap.front()) break;
      const bool left = r - d >= 0, right = r + d < n;
      if (!left && !right) break;
      if (left) offer(r - d, d);
      if (right) offer(r + d, d);
    }
    const int radius = heap.front();
    marginal[static_cast<std::size_t>(i)] = psi[static_cast<std::size_t>(marginal_count(r, radius, n) + 1)] +
                                            psi[static_cast<std::size_t>(marginal_count(yi, radius, n) + 1)];
  }
  double marginal_sum = 0.0;
  for (double term : marginal) marginal_sum += term;
  return psi[static_cast<std::size_t>(k)] + psi[static_cast<std::size_t>(n)] - marginal_sum / static_cast<double>(n);
}

double normalized_mutual_information(VectorRef x, VectorRef y) {
  const Index n = x.size();
  if (y.size() != n || n < 4) throw Error(ErrorCode::InvalidArgument, "normalized MI needs equal lengths >= 4");
  const Index bins = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))));
  const auto rx = min_ranks(x);
  const auto ry = min_ranks(y);
  Matrix joint = Matrix::Zero(bins, bins);
  for (Index i = 0; i < n; ++i) {
    const Index bx = rx[static_cast<std::size_t>(i)] * bins / n;
    const Index by = ry[static_cast<std::size_t>(i)] * bins / n;
    joint(bx, by) += 1.0;
  }
  joint /= static_cast<double>(n);
  const Vector px = joint.rowwise().sum();
  const Vector py = joint.colwise().sum().transpose();
  auto entropy = [](const Vector& p) {
    double h = 0.0;
    for (double v : p)
      if (v > 0.0) h -= v * std::log(v);
    return h;
  };
  const double hx = entropy(px), hy = entropy(py);
  if (!(hx > 0.0) || !(hy > 0.0)) throw Error(ErrorCode::DegenerateInput, "an axis has zero binned entropy");
  double mi = 0.0;
  for (Index a = 0; a < bins; ++a)
    for (Index b = 0; b < bins; ++b) {
      const double p = joint(a, b);
      if (p > 0.0) mi += p * std::log(p / (px[a] * py[b]));
    }
  return std::clamp(mi / std::sqrt(hx * hy), 0.0, 1.0);
}

}  // namespace equibench
