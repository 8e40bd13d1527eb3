#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "equibench/error.hpp"
#include "equibench/relations.hpp"
#include "equibench/stats.hpp"
#include "equibench/types.hpp"

namespace equibench {

enum class NoiseKind : std::uint8_t { Msnr, Ssnr };

std::string_view to_string(NoiseKind kind) noexcept;

/// Requested noise level. tolerance and max_steps only drive the SSNR
/// heuristic search.
struct NoiseTarget {
  NoiseKind kind = NoiseKind::Msnr;
  double ratio = 11.529;
  double tolerance = 0.03;
  int max_steps = 100;

  static NoiseTarget msnr(double ratio) { return {NoiseKind::Msnr, ratio, 0.03, 100}; }
  static NoiseTarget ssnr(double ratio, double tolerance = 0.03, int max_steps = 100) {
    return {NoiseKind::Ssnr, ratio, tolerance, max_steps};
  }

  /// Throws InvalidArgument on a non-positive ratio, tolerance or step count.
  void validate() const;
};

/// var(y) / var(eps), both with divisor n - 1.
template <typename DerivedY, typename DerivedE>
double msnr(const Eigen::MatrixBase<DerivedY>& y, const Eigen::MatrixBase<DerivedE>& eps) {
  if (y.size() != eps.size() || y.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "msnr needs two equal-length vectors of length >= 2");
  const double noise_var = sample_variance(eps);
  if (!(noise_var > 0.0)) throw Error(ErrorCode::DegenerateNoise, "noise has zero variance");
  return sample_variance(y) / noise_var;
}

/// sum(y^2) / sum(eps^2).
template <typename DerivedY, typename DerivedE>
double ssnr(const Eigen::MatrixBase<DerivedY>& y, const Eigen::MatrixBase<DerivedE>& eps) {
  if (y.size() != eps.size() || y.size() < 1)
    throw Error(ErrorCode::InvalidArgument, "ssnr needs two non-empty equal-length vectors");
  const double noise_power = eps.squaredNorm();
  if (!(noise_power > 0.0)) throw Error(ErrorCode::DegenerateNoise, "noise is identically zero");
  return y.squaredNorm() / noise_power;
}

/// Two models y1 = f1(x) + e and y2 = f2(x) + e / a sharing one noise draw,
/// with a^2 = var(f1(x)) / var(f2(x)) on the realized sample.
struct NoisyModelPair {
  Vector x;
  Vector y1;
  Vector y2;
  Vector noise1;  // e
  Vector noise2;  // e / a
  double scale_a = 1.0;
  double achieved_ratio_1 = 0.0;
  double achieved_ratio_2 = 0.0;
};

/// Builds a noisy-equal pair at equal MSNR.
///
/// With `decorrelate` (the default) the noise is first projected onto the
/// orthogonal complement of span{1, f1(x), f2(x)}, which makes the sample
/// covariance between signal and noise exactly zero. The realized ratios
/// var(y)/var(e) then obey the variance-additivity identity that the
/// construction relies on, and the two MSNRs agree to round-off. Without
/// it they agree only up to the O(n^-1/2) sample cross-covariance.
NoisyModelPair make_msnr_equal_pair(Relation f1, Relation f2, VectorRef x, VectorRef eps, bool decorrelate = true);

enum class R2Form : std::uint8_t {
  Consistent,  // 1 - 1/msnr, follows from msnr = var(y)/var(e) with independent noise
  Printed,     // 1 / sqrt(1 + 1/msnr)
};

/// Noise-free limit (msnr = +inf) maps to 1. The consistent form requires
/// msnr > 1 and throws OutOfRange otherwise.
double msnr_to_r2(double msnr_value, R2Form form = R2Form::Consistent);

struct HeuristicNoise {
  Vector noise;
  double achieved = 0.0;            // sum(signal^2)/sum(noise^2) of the kept draw
  int steps = 0;                    // draws made
  std::vector<double> best_delta;   // best-so-far |achieved - target| after each draw
};

/// What a heuristic draw is scored on.
enum class SsnrObjective : std::uint8_t {
  CleanSignal,  // sum(f^2) / sum(e^2), the classic search objective
  NoisySignal,  // sum((f + e)^2) / sum(e^2), the ratio exact_ssnr_adjust solves for
};

/// Randomized search for noise whose ratio to `signal` lands near `target`:
/// each draw picks a mean uniformly in [-an, an] with an = sqrt(P/n) and a
/// normal sample with that mean and sd sqrt(P/n - mean^2). P is
/// sum(signal^2)/target for the clean objective and sum(signal^2)/(target-1)
/// for the noisy one (when target > 1), so that draws are centred on the
/// target either way. Keeps the best draw; stops once within `tolerance` or
/// after `max_steps` draws.
HeuristicNoise heuristic_ssnr_noise(VectorRef signal, double target, int max_steps = 100, double tolerance = 0.03,
                                    std::uint64_t seed = 0, SsnrObjective objective = SsnrObjective::CleanSignal);

/// Replaces the last noise component so that ssnr(signal + noise, noise)
/// equals `target` exactly. Solves
///   (t-1) e^2 - 2 f e + [t sum_{i<n} e_i^2 - sum_{i<n} (f_i+e_i)^2 - f^2] = 0
/// and keeps the root of smallest magnitude. Throws NoRealRoot when the
/// discriminant is negative (callers redraw and retry).
Vector exact_ssnr_adjust(VectorRef signal, VectorRef noise, double target);

/// Noisy sample of one relation at a target noise level.
struct NoisyDataset {
  Relation relation = Relation::Line;
  NoiseTarget target;
  Vector x;
  Vector signal;  // f(x)
  Vector noise;
  Vector y;       // signal + noise
  double achieved_ratio = 0.0;
  std::uint64_t seed = 0;
};

/// Population variance of U(0, 1), the reference-model signal variance.
inline constexpr double kUniformVariance = 1.0 / 12.0;

/// Adds noise to f(x) at the target.
///
/// MSNR: `standard_noise` (iid N(0,1)) is scaled so that the reference model
/// y = x + s z has var(x)/(s^2) = ratio - 1 in population, then paired with
/// the relation through make_msnr_equal_pair. The achieved ratio therefore
/// fluctuates per draw, identically for every relation sharing (x, z).
///
/// SSNR: heuristic search on the noisy-signal objective seeded by `seed`,
/// then the exact last-component solve, which then only nudges one value.
/// A draw that lands below the target usually leaves no real root, so up to
/// `max_attempts` fresh draws are made on NoRealRoot.
NoisyDataset make_noisy(Relation relation, VectorRef x, VectorRef standard_noise, const NoiseTarget& target,
                        std::uint64_t seed, int max_attempts = 40);

/// Draws x and the base noise from `seed`, then calls make_noisy.
NoisyDataset generate_dataset(Relation relation, Index n, const NoiseTarget& target, std::uint64_t seed);

/// n iid N(0, 1) draws.
Vector standard_normal(Index n, std::uint64_t seed);

}  // namespace equibench
