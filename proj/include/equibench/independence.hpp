#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "equibench/measures.hpp"
#include "equibench/noise.hpp"
#include "equibench/relations.hpp"
#include "equibench/types.hpp"

namespace equibench {

/// Null scores of `scorer` under `permutations` uniformly random re-pairings.
/// Permutation b is drawn from derive_seed(seed, b, attempt); a permutation
/// whose evaluation throws is redrawn up to three times before the error
/// propagates. Requires permutations >= 20.
Vector permutation_null(const PermutationScorer& scorer, Index n, int permutations, std::uint64_t seed);

/// Convenience overload building the scorer for (x, y).
Vector permutation_null(MeasureKind measure, VectorRef x, VectorRef y, int permutations, std::uint64_t seed,
                        const MeasureParams& params = {}, std::uint64_t measure_seed = 0);

/// Upper-tail critical value: the ceil((1 - alpha) * B)-th order statistic of
/// the null scores. A score strictly above it rejects independence.
double critical_value(std::span<const double> null_scores, double alpha);
double critical_value(VectorRef null_scores, double alpha);

/// Sample size actually scored: HHG is evaluated on the first hhg_cap points
/// when the generated sample is larger (points are iid, so this is a uniform
/// subsample).
Index scored_size(MeasureKind measure, Index n, const MeasureParams& params) noexcept;

struct PowerRequest {
  MeasureKind measure = MeasureKind::Pcor;
  Relation relation = Relation::Line;
  NoiseTarget noise;
  Index n = 500;
  int reps = 100;
  double alpha = 0.05;
  int permutations = 200;
  std::uint64_t seed = 0;
  MeasureParams params;
  /// Replace y by an independent shuffle before testing (calibration check).
  bool null_injection = false;
  /// Use one critical value, from the first replicate's permutation null,
  /// for every replicate instead of recomputing it per dataset.
  bool shared_lambda = false;
  int threads = 1;
};

struct PowerEstimate {
  MeasureKind measure = MeasureKind::Pcor;
  Relation relation = Relation::Line;
  NoiseTarget noise;
  Index n = 0;              // scored sample size
  int reps = 0;             // requested
  int reps_completed = 0;
  int rejections = 0;
  double alpha = 0.05;
  double power = 0.0;       // rejections / reps_completed
  double ci_low = 0.0;      // Wilson 95%
  double ci_high = 1.0;
  std::vector<std::string> failures;  // one message per missing replicate
};

/// Rejection rate of the permutation test over `reps` simulated datasets.
/// Dataset r is generated from derive_seed(seed, "power-data", r, attempt);
/// generator failures are retried with fresh seeds up to five times, after
/// which the replicate is reported missing. Results are identical for any
/// thread count.
PowerEstimate estimate_power(const PowerRequest& request);

}  // namespace equibench
