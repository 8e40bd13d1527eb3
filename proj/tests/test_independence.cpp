#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "equibench/independence.hpp"
#include "equibench/noise.hpp"
#include "equibench/stats.hpp"
#include "oracles.hpp"

using namespace equibench;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::NotImplemented;
}

// Fails on every other call; counts calls.
class FlakyScorer : public PermutationScorer {
 public:
  explicit FlakyScorer(int fail_every) : fail_every_(fail_every) {}
  double operator()(std::span<const Index> perm) const override {
    ++calls_;
    if (fail_every_ > 0 && calls_ % fail_every_ == 0) throw Error(ErrorCode::DegenerateInput, "flaky");
    return static_cast<double>(perm[0]);
  }
  mutable int calls_ = 0;

 private:
  int fail_every_;
};

class BrokenScorer : public PermutationScorer {
 public:
  double operator()(std::span<const Index>) const override {
    ++calls_;
    throw Error(ErrorCode::DegenerateInput, "always");
  }
  mutable int calls_ = 0;
};

PowerRequest pcor_request() {
  PowerRequest r;
  r.measure = MeasureKind::Pcor;
  r.relation = Relation::Line;
  r.noise = NoiseTarget::msnr(1.5);
  r.n = 30;
  r.reps = 60;
  r.permutations = 50;
  r.seed = 77;
  return r;
}

}  // namespace

TEST(PermutationNull, DeterministicAndValidated) {
  const Vector x = sample_x(50, 1);
  const Vector y = standard_normal(50, 2);
  EXPECT_EQ(permutation_null(MeasureKind::Pcor, x, y, 100, 5), permutation_null(MeasureKind::Pcor, x, y, 100, 5));
  EXPECT_NE(permutation_null(MeasureKind::Pcor, x, y, 100, 5), permutation_null(MeasureKind::Pcor, x, y, 100, 6));
  EXPECT_EQ(code_of([&] { permutation_null(MeasureKind::Pcor, x, y, 5, 1); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(permutation_null(MeasureKind::Pcor, x, y, 20, 1).size(), 20);
}

TEST(PermutationNull, PearsonNullIsCentred) {
  const Vector x = sample_x(200, 3);
  const Vector y = eval_relation(Relation::Line, x) + 0.1 * standard_normal(200, 4);
  const Vector null_scores = permutation_null(MeasureKind::Pcor, x, y, 500, 9);
  EXPECT_NEAR(null_scores.mean(), 0.0, 0.02);
}

TEST(PermutationNull, FailedPermutationsAreRedrawn) {
  const FlakyScorer flaky(2);
  const Vector null_scores = permutation_null(flaky, 10, 30, 1);
  EXPECT_EQ(null_scores.size(), 30);
  EXPECT_GT(flaky.calls_, 30);
  const BrokenScorer broken;
  EXPECT_EQ(code_of([&] { permutation_null(broken, 10, 30, 1); }), ErrorCode::DegenerateInput);
  EXPECT_EQ(broken.calls_, 4);  // first try plus three redraws
}

TEST(CriticalValue, OrderStatistic) {
  std::vector<double> scores(100);
  std::iota(scores.begin(), scores.end(), 1.0);
  EXPECT_EQ(critical_value(scores, 0.05), 95.0);
  EXPECT_EQ(critical_value(scores, 0.5), 50.0);
  EXPECT_EQ(critical_value(std::vector<double>(40, 3.25), 0.05), 3.25);
  // shuffled input gives the same order statistic
  std::vector<double> shuffled{5, 1, 4, 2, 3, 9, 7, 8, 6, 10, 11, 15, 13, 12, 14, 20, 18, 19, 17, 16};
  EXPECT_EQ(critical_value(shuffled, 0.05), 19.0);
  EXPECT_EQ(code_of([&] { critical_value(scores, 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { critical_value(scores, 1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { critical_value(std::vector<double>{}, 0.05); }), ErrorCode::InvalidArgument);
}

TEST(CriticalValue, NonDecreasingInConfidence) {
  const Vector null_scores = standard_normal(250, 10);
  double previous = -1e300;
  for (double alpha = 0.99; alpha > 0.001; alpha -= 0.01) {
    const double lambda = critical_value(null_scores, alpha);
    EXPECT_GE(lambda, previous);
    previous = lambda;
  }
}

TEST(EstimatePower, InvariantsAndDeterminism) {
  const PowerRequest request = pcor_request();
  const PowerEstimate a = estimate_power(request);
  const PowerEstimate b = estimate_power(request);
  EXPECT_EQ(a.rejections, b.rejections);
  EXPECT_EQ(a.power, b.power);
  EXPECT_EQ(a.reps_completed, 60);
  EXPECT_TRUE(a.failures.empty());
  EXPECT_EQ(a.power, static_cast<double>(a.rejections) / a.reps_completed);
  EXPECT_LE(a.ci_low, a.power);
  EXPECT_GE(a.ci_high, a.power);
  const auto [lo, hi] = wilson_interval(static_cast<std::size_t>(a.rejections), 60);
  EXPECT_EQ(a.ci_low, lo);
  EXPECT_EQ(a.ci_high, hi);
}

TEST(EstimatePower, ThreadCountDoesNotChangeResults) {
  PowerRequest request = pcor_request();
  request.measure = MeasureKind::Dcor;
  request.reps = 40;
  const PowerEstimate one = estimate_power(request);
  request.threads = 4;
  const PowerEstimate four = estimate_power(request);
  EXPECT_EQ(one.rejections, four.rejections);
  EXPECT_EQ(one.power, four.power);
}

TEST(EstimatePower, RejectsTooFewReps) {
  PowerRequest request = pcor_request();
  request.reps = 29;
  EXPECT_EQ(code_of([&] { estimate_power(request); }), ErrorCode::InvalidArgument);
}

TEST(EstimatePower, NullInjectionIsCalibrated) {
  PowerRequest request = pcor_request();
  request.reps = 200;
  request.null_injection = true;
  request.noise = NoiseTarget::msnr(11.529);
  const PowerEstimate est = estimate_power(request);
  const auto [lo, hi] = oracle::binomial_band(200, 0.05);
  EXPECT_GE(est.rejections, lo);
  EXPECT_LE(est.rejections, hi);
}

TEST(EstimatePower, PearsonDetectsStrongLinearSignal) {
  PowerRequest request = pcor_request();
  request.n = 500;
  request.reps = 100;
  request.permutations = 200;
  request.noise = NoiseTarget::msnr(3.0057);
  EXPECT_GE(estimate_power(request).power, 0.99);
}

TEST(EstimatePower, MonotoneInNoiseLevel) {
  // Small n so that the three levels give distinguishable power.
  PowerRequest request = pcor_request();
  request.n = 12;
  request.reps = 200;
  request.permutations = 100;
  std::vector<PowerEstimate> estimates;
  for (double level : {1.25, 1.5, 3.0}) {
    request.noise = NoiseTarget::msnr(level);
    estimates.push_back(estimate_power(request));
  }
  int inversions = 0;
  for (std::size_t i = 1; i < estimates.size(); ++i) {
    if (estimates[i].power < estimates[i - 1].power) {
      ++inversions;
      EXPECT_GE(estimates[i].ci_high, estimates[i - 1].ci_low);  // overlapping intervals
    }
  }
  EXPECT_LE(inversions, 1);
  EXPECT_GT(estimates.back().power, estimates.front().power);
}

TEST(EstimatePower, SharedLambdaMode) {
  PowerRequest request = pcor_request();
  request.shared_lambda = true;
  const PowerEstimate est = estimate_power(request);
  EXPECT_EQ(est.reps_completed, 60);
  EXPECT_GE(est.power, 0.0);
  EXPECT_LE(est.power, 1.0);
}

TEST(EstimatePower, HhgIsScoredOnACappedSubsample) {
  PowerRequest request = pcor_request();
  request.measure = MeasureKind::Hhg;
  request.n = 60;
  request.reps = 30;
  request.permutations = 20;
  request.params.hhg_cap = 25;
  const PowerEstimate est = estimate_power(request);
  EXPECT_EQ(est.n, 25);
  EXPECT_EQ(est.reps_completed, 30);
  EXPECT_EQ(scored_size(MeasureKind::Pcor, 60, request.params), 60);
}

TEST(EstimatePower, MeasureFailuresAreReportedAsMissing) {
  PowerRequest request = pcor_request();
  request.measure = MeasureKind::Cdc;  // empty plugin slot
  request.reps = 30;
  const PowerEstimate est = estimate_power(request);
  EXPECT_EQ(est.reps_completed, 0);
  EXPECT_EQ(est.failures.size(), 30u);
  EXPECT_TRUE(std::isnan(est.power));
}
