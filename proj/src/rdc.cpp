#include "equibench/rdc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "equibench/error.hpp"
#include "equibench/stats.hpp"

namespace equibench {
namespace {

// Orthonormal basis of the centred column space, rank-truncated.
Matrix centred_basis(const Matrix& features, double rank_tolerance) {
  Matrix centred = features.rowwise() - features.colwise().mean();
  Eigen::BDCSVD<Matrix> svd(centred, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv[0] > 0.0)) return Matrix(features.rows(), 0);
  Index rank = 0;
  while (rank < sv.size() && sv[rank] > rank_tolerance * sv[0]) ++rank;
  return svd.matrixU().leftCols(rank);
}

Matrix sinusoidal_features(VectorRef copula, const Matrix& weights) {
  Matrix f(copula.size(), weights.cols());
  for (Index c = 0; c < weights.cols(); ++c)
    f.col(c) = (copula.array() * weights(0, c) + weights(1, c)).sin().matrix();
  return f;
}

}  // namespace

double max_canonical_correlation(const Matrix& a, const Matrix& b, double rank_tolerance) {
  const Matrix qa = centred_basis(a, rank_tolerance);
  const Matrix qb = centred_basis(b, rank_tolerance);
  if (qa.cols() == 0 || qb.cols() == 0) return 0.0;
  const Matrix cross = qa.transpose() * qb;
  Eigen::JacobiSVD<Matrix> svd(cross);
  return std::clamp(svd.singularValues()[0], 0.0, 1.0);
}

double rdc(VectorRef x, VectorRef y, int k, double s, std::uint64_t seed) {
  const Index n = x.size();
  if (y.size() != n) throw Error(ErrorCode::InvalidArgument, "x and y differ in length");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "rdc needs k >= 1");
  if (n < std::max<Index>(k, 2)) throw Error(ErrorCode::InvalidArgument, "rdc needs n >= k");
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "rdc scale s must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, s / 2.0);
  Matrix weights(2, k);
  for (Index c = 0; c < k; ++c)
    for (Index r = 0; r < 2; ++r) weights(r, c) = normal(rng);

  const double nd = static_cast<double>(n);
  const Vector u = mid_ranks(x) / nd;
  const Vector v = mid_ranks(y) / nd;
  return max_canonical_correlation(sinusoidal_features(u, weights), sinusoidal_features(v, weights));
}

}  // namespace equibench
