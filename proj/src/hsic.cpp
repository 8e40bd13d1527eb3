#include "equibench/hsic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "equibench/error.hpp"

namespace equibench {

double median_pairwise_distance(VectorRef v) {
  const Index n = v.size();
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double dist = std::abs(v[i] - v[j]);
      if (dist > 0.0) d.push_back(dist);
    }
  if (d.empty()) throw Error(ErrorCode::DegenerateInput, "all pairwise distances are zero");
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  const double upper = d[mid];
  if (d.size() % 2 == 1) return upper;
  const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

Matrix gaussian_gram(VectorRef v, double bandwidth) {
  const Index n = v.size();
  const double scale = -1.0 / (2.0 * bandwidth * bandwidth);
  Matrix k(n, n);
  for (Index j = 0; j < n; ++j) {
    k(j, j) = 1.0;
    for (Index i = j + 1; i < n; ++i) {
      const double d = v[i] - v[j];
      k(i, j) = k(j, i) = std::exp(scale * d * d);
    }
  }
  return k;
}

Matrix centered_gram(VectorRef v, double bandwidth) {
  Matrix k = gaussian_gram(v, bandwidth);
  const Eigen::VectorXd col_means = k.colwise().mean().transpose();  // symmetric: equals row means
  const double grand = col_means.mean();
  k.colwise() -= col_means;
  k.rowwise() -= col_means.transpose();
  k.array() += grand;
  return k;
}

namespace {

void check_hsic_input(VectorRef x, VectorRef y) {
  if (x.size() != y.size() || x.size() < 4)
    throw Error(ErrorCode::InvalidArgument, "hsic needs two equal-length vectors of length >= 4");
}

}  // namespace

double hsic(VectorRef x, VectorRef y) {
  check_hsic_input(x, y);
  const Matrix kx = centered_gram(x, median_pairwise_distance(x));
  const Matrix ly = centered_gram(y, median_pairwise_distance(y));
  const double n = static_cast<double>(x.size());
  return std::max(0.0, kx.cwiseProduct(ly).sum() / (n * n));
}

HsicPermutationKernel::HsicPermutationKernel(VectorRef x, VectorRef y) {
  check_hsic_input(x, y);
  centered_x_ = centered_gram(x, median_pairwise_distance(x));
  centered_y_ = centered_gram(y, median_pairwise_distance(y));
}

double HsicPermutationKernel::operator()(std::span<const Index> perm) const {
  const Index n = centered_x_.rows();
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    const double* kcol = centered_x_.col(j).data();
    const double* lcol = centered_y_.col(perm[static_cast<std::size_t>(j)]).data();
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) acc += kcol[i] * lcol[perm[static_cast<std::size_t>(i)]];
    total += acc;
  }
  const double nd = static_cast<double>(n);
  return std::max(0.0, total / (nd * nd));
}

}  // namespace equibench
