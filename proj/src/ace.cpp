#include "equibench/ace.hpp"

#include <algorithm>
#include <cmath>

#include "equibench/error.hpp"
#include "equibench/stats.hpp"

namespace equibench {
namespace {

class BinSmoother {
 public:
  BinSmoother(VectorRef v, Index bins) : bin_of_(static_cast<std::size_t>(v.size())), counts_(Vector::Zero(bins)) {
    const Index n = v.size();
    const auto ranks = min_ranks(v);
    for (Index i = 0; i < n; ++i) {
      const Index b = ranks[static_cast<std::size_t>(i)] * bins / n;
      bin_of_[static_cast<std::size_t>(i)] = b;
      counts_[b] += 1.0;
    }
  }

  // Conditional mean of `values` given the bin.
  Vector operator()(const Vector& values) const {
    Vector sums = Vector::Zero(counts_.size());
    for (Index i = 0; i < values.size(); ++i) sums[bin_of_[static_cast<std::size_t>(i)]] += values[i];
    Vector out(values.size());
    for (Index i = 0; i < values.size(); ++i) {
      const Index b = bin_of_[static_cast<std::size_t>(i)];
      out[i] = sums[b] / counts_[b];
    }
    return out;
  }

 private:
  std::vector<Index> bin_of_;
  Vector counts_;
};

// Centres and scales to unit (population) variance; false if constant.
bool standardize(Vector& v) {
  v.array() -= v.mean();
  const double sd = std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
  if (!(sd > 1e-300)) return false;
  v /= sd;
  return true;
}

}  // namespace

AceResult ace(VectorRef x, VectorRef y, int max_iter, double tol) {
  const Index n = x.size();
  if (y.size() != n) throw Error(ErrorCode::InvalidArgument, "x and y differ in length");
  if (n < 20) throw Error(ErrorCode::InvalidArgument, "ace needs n >= 20");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "ace needs max_iter >= 1");

  const Index bins = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))));
  const BinSmoother smooth_x(x, bins);
  const BinSmoother smooth_y(y, bins);

  Vector theta = y;
  if (!standardize(theta)) throw Error(ErrorCode::DegenerateInput, "ace: y is constant");

  AceResult result;
  const double nd = static_cast<double>(n);
  double previous = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const Vector phi = smooth_x(theta);
    // theta has unit variance, so corr(theta, phi) = ||phi|| (population norm).
    const double corr = std::sqrt(phi.squaredNorm() / nd);
    result.trace.push_back(corr);
    result.iterations = iter;
    result.correlation = std::min(corr, 1.0);
    if (iter > 1 && std::abs(corr - previous) < tol) {
      result.converged = true;
      break;
    }
    previous = corr;
    Vector next = smooth_y(phi);
    if (!standardize(next)) {
      result.correlation = 0.0;
      result.converged = true;
      break;
    }
    theta = std::move(next);
  }
  return result;
}

}  // namespace equibench
