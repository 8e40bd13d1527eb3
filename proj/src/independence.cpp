#include "equibench/independence.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>

#include "equibench/parallel.hpp"
#include "equibench/seed.hpp"
#include "equibench/stats.hpp"

namespace equibench {

Vector permutation_null(const PermutationScorer& scorer, Index n, int permutations, std::uint64_t seed) {
  if (permutations < 20) throw Error(ErrorCode::InvalidArgument, "permutation null needs at least 20 permutations");
  constexpr int kRetries = 3;
  Vector null_scores(permutations);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (int b = 0; b < permutations; ++b) {
    for (int attempt = 0;; ++attempt) {
      std::iota(perm.begin(), perm.end(), Index{0});
      std::mt19937_64 rng(derive_seed(seed, b, attempt));
      std::shuffle(perm.begin(), perm.end(), rng);
      try {
        null_scores[b] = scorer(perm);
        break;
      } catch (const Error&) {
        if (attempt >= kRetries) throw;
      }
    }
  }
  return null_scores;
}

Vector permutation_null(MeasureKind measure, VectorRef x, VectorRef y, int permutations, std::uint64_t seed,
                        const MeasureParams& params, std::uint64_t measure_seed) {
  const auto scorer = make_permutation_scorer(measure, x, y, params, measure_seed);
  return permutation_null(*scorer, x.size(), permutations, seed);
}

double critical_value(std::span<const double> null_scores, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  if (null_scores.empty()) throw Error(ErrorCode::InvalidArgument, "no null scores");
  std::vector<double> sorted(null_scores.begin(), null_scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double b = static_cast<double>(sorted.size());
  // The small offset keeps e.g. (1 - 0.05) * 100 from rounding up to 96.
  auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * b - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

double critical_value(VectorRef null_scores, double alpha) {
  return critical_value(std::span<const double>(null_scores.data(), static_cast<std::size_t>(null_scores.size())),
                        alpha);
}

Index scored_size(MeasureKind measure, Index n, const MeasureParams& params) noexcept {
  return measure == MeasureKind::Hhg ? std::min(n, params.hhg_cap) : n;
}

namespace {

struct ReplicateData {
  Vector x;
  Vector y;
};

ReplicateData simulate_replicate(const PowerRequest& request, int rep) {
  constexpr int kAttempts = 5;
  for (int attempt = 0;; ++attempt) {
    const std::uint64_t data_seed = derive_seed(request.seed, "power-data", rep, attempt);
    try {
      const Vector x = sample_x(request.n, derive_seed(data_seed, "x"));
      const Vector z = standard_normal(request.n, derive_seed(data_seed, "noise"));
      NoisyDataset data = make_noisy(request.relation, x, z, request.noise, derive_seed(data_seed, "ssnr"));
      Vector y = std::move(data.y);
      if (request.null_injection) {
        std::mt19937_64 rng(derive_seed(data_seed, "null-injection"));
        std::shuffle(y.begin(), y.end(), rng);
      }
      const Index m = scored_size(request.measure, request.n, request.params);
      return {x.head(m), y.head(m)};
    } catch (const Error& e) {
      const bool generator_failure = e.code() == ErrorCode::NoRealRoot || e.code() == ErrorCode::DegenerateNoise;
      if (!generator_failure || attempt + 1 >= kAttempts) throw;
    }
  }
}

}  // namespace

PowerEstimate estimate_power(const PowerRequest& request) {
  if (request.reps < 30) throw Error(ErrorCode::InvalidArgument, "power estimation needs reps >= 30");
  if (!(request.alpha > 0.0 && request.alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  if (request.permutations < 20) throw Error(ErrorCode::InvalidArgument, "needs at least 20 permutations");
  request.noise.validate();

  PowerEstimate estimate;
  estimate.measure = request.measure;
  estimate.relation = request.relation;
  estimate.noise = request.noise;
  estimate.n = scored_size(request.measure, request.n, request.params);
  estimate.reps = request.reps;
  estimate.alpha = request.alpha;

  auto measure_seed = [&](int rep) { return derive_seed(request.seed, "measure", to_string(request.measure), rep); };
  auto permutation_seed = [&](int rep) { return derive_seed(request.seed, "permutation", rep); };

  std::optional<double> shared;
  if (request.shared_lambda) {
    const ReplicateData pilot = simulate_replicate(request, 0);
    const auto scorer =
        make_permutation_scorer(request.measure, pilot.x, pilot.y, request.params, measure_seed(0));
    shared = critical_value(permutation_null(*scorer, pilot.x.size(), request.permutations, permutation_seed(0)),
                            request.alpha);
  }

  struct Outcome {
    bool completed = false;
    bool rejected = false;
    std::string failure;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(request.reps));
  parallel_for(outcomes.size(), request.threads, [&](std::size_t index) {
    const int rep = static_cast<int>(index);
    Outcome& out = outcomes[index];
    try {
      const ReplicateData data = simulate_replicate(request, rep);
      const auto scorer = make_permutation_scorer(request.measure, data.x, data.y, request.params, measure_seed(rep));
      std::vector<Index> identity(static_cast<std::size_t>(data.x.size()));
      std::iota(identity.begin(), identity.end(), Index{0});
      const double observed = (*scorer)(identity);
      const double lambda =
          shared ? *shared
                 : critical_value(permutation_null(*scorer, data.x.size(), request.permutations, permutation_seed(rep)),
                                  request.alpha);
      out.rejected = observed > lambda;
      out.completed = true;
    } catch (const std::exception& e) {
      out.failure = "rep " + std::to_string(rep) + ": " + e.what();
    }
  });

  for (const Outcome& out : outcomes) {
    if (out.completed) {
      ++estimate.reps_completed;
      if (out.rejected) ++estimate.rejections;
    } else {
      estimate.failures.push_back(out.failure);
    }
  }
  if (estimate.reps_completed > 0) {
    estimate.power = static_cast<double>(estimate.rejections) / estimate.reps_completed;
    std::tie(estimate.ci_low, estimate.ci_high) = wilson_interval(
        static_cast<std::size_t>(estimate.rejections), static_cast<std::size_t>(estimate.reps_completed));
  } else {
    estimate.power = std::numeric_limits<double>::quiet_NaN();
  }
  return estimate;
}

}  // namespace equibench
