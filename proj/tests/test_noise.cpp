#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "equibench/noise.hpp"
#include "equibench/relations.hpp"
#include "equibench/seed.hpp"
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

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double value : values) v[i++] = value;
  return v;
}

}  // namespace

TEST(NoiseTarget, DefaultsAndValidation) {
  const NoiseTarget t;
  EXPECT_EQ(t.tolerance, 0.03);
  EXPECT_EQ(t.max_steps, 100);
  EXPECT_NO_THROW(NoiseTarget::ssnr(10.0).validate());
  EXPECT_THROW(NoiseTarget::msnr(0.0).validate(), Error);
  EXPECT_THROW(NoiseTarget::ssnr(10.0, 0.0).validate(), Error);
  EXPECT_THROW(NoiseTarget::ssnr(10.0, 0.03, 0).validate(), Error);
}

TEST(Msnr, HandComputedRatios) {
  const Vector eps = vec({1.0, -1.0, 1.0, -1.0});
  EXPECT_DOUBLE_EQ(msnr(eps, eps), 1.0);
  const Vector y = std::sqrt(12.0) * eps;
  EXPECT_NEAR(msnr(y, eps), 12.0, 1e-14);
  EXPECT_EQ(code_of([] { msnr(vec({1, 2, 3}), vec({2, 2, 2})); }), ErrorCode::DegenerateNoise);
}

TEST(Ssnr, HandComputedRatios) {
  EXPECT_DOUBLE_EQ(ssnr(vec({3, 4}), vec({1, 0})), 25.0);
  EXPECT_DOUBLE_EQ(ssnr(vec({0.3, -2}), vec({0.3, -2})), 1.0);
  EXPECT_EQ(code_of([] { ssnr(vec({1, 1}), vec({0, 0})); }), ErrorCode::DegenerateNoise);
}

TEST(Ratios, ScaleCovariant) {
  const Vector x = sample_x(50, 1);
  const Vector e = standard_normal(50, 2);
  const Vector y = eval_relation(Relation::Cubic, x) + e;
  for (double c : {-3.0, 0.01, 7.5}) {
    EXPECT_NEAR(msnr((c * y).eval(), (c * e).eval()), msnr(y, e), 1e-12 * msnr(y, e));
    EXPECT_NEAR(ssnr((c * y).eval(), (c * e).eval()), ssnr(y, e), 1e-12 * ssnr(y, e));
  }
}

TEST(MsnrEqualPair, IdenticalModelsGiveUnitScale) {
  const Vector x = sample_x(200, 3);
  const Vector e = 0.1 * standard_normal(200, 4);
  const NoisyModelPair pair = make_msnr_equal_pair(Relation::Line, Relation::Line, x, e);
  EXPECT_DOUBLE_EQ(pair.scale_a, 1.0);
  EXPECT_EQ(pair.y1, pair.y2);
}

TEST(MsnrEqualPair, ScaleMatchesAnalyticVarianceRatio) {
  // var(x) = 1/12 and var(4x^2) = 64/45 on U(0, 1)
  const Index n = 1'000'000;
  const NoisyModelPair pair =
      make_msnr_equal_pair(Relation::Line, Relation::Parabola, sample_x(n, 5), standard_normal(n, 6));
  const double analytic = (1.0 / 12.0) / (64.0 / 45.0);
  EXPECT_NEAR(pair.scale_a * pair.scale_a, analytic, 0.02 * analytic);
}

TEST(MsnrEqualPair, EveryRelationAgainstLineIsNoisyEqual) {
  const Index n = 300;
  const Vector x = sample_x(n, 11);
  const Vector e = 0.2 * standard_normal(n, 12);
  for (const RelationSpec& spec : list_relations()) {
    const NoisyModelPair pair = make_msnr_equal_pair(Relation::Line, spec.id, x, e);
    const Vector f1 = eval_relation(Relation::Line, x);
    const Vector f2 = eval_relation(spec.id, x);
    EXPECT_NEAR(pair.scale_a * pair.scale_a, oracle::variance(f1) / oracle::variance(f2),
                1e-12 * oracle::variance(f1) / oracle::variance(f2))
        << spec.name;
    // Realized ratios recomputed independently from the returned vectors.
    const double r1 = oracle::variance(pair.y1) / oracle::variance(pair.noise1);
    const double r2 = oracle::variance(pair.y2) / oracle::variance(pair.noise2);
    EXPECT_NEAR(r1, r2, 1e-10 * r1) << spec.name;
    EXPECT_NEAR(pair.achieved_ratio_1, r1, 1e-10 * r1);
    EXPECT_NEAR(pair.achieved_ratio_2, r2, 1e-10 * r2);
    EXPECT_TRUE(((pair.y2 - f2) - pair.noise2).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST(MsnrEqualPair, WithoutDecorrelationRatiosDifferOnlyByCrossCovariance) {
  const Index n = 2000;
  const Vector x = sample_x(n, 21);
  const Vector e = 0.2 * standard_normal(n, 22);
  const NoisyModelPair pair = make_msnr_equal_pair(Relation::Line, Relation::SineHigh, x, e, false);
  EXPECT_EQ(pair.noise1, e);
  const double rel = std::abs(pair.achieved_ratio_1 - pair.achieved_ratio_2) / pair.achieved_ratio_1;
  EXPECT_LT(rel, 0.1);
}

TEST(MsnrEqualPair, ConstantSignalIsDegenerate) {
  const Vector x = Vector::Constant(10, 0.3);
  EXPECT_EQ(code_of([&] { make_msnr_equal_pair(Relation::Line, Relation::Parabola, x, standard_normal(10, 1)); }),
            ErrorCode::DegenerateSignal);
}

TEST(MsnrToR2, ClosedFormsAndBounds) {
  EXPECT_EQ(msnr_to_r2(std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_NEAR(msnr_to_r2(11.529), 0.9133, 1e-4);
  EXPECT_NEAR(msnr_to_r2(11.529, R2Form::Printed), 1.0 / std::sqrt(1.0 + 1.0 / 11.529), 1e-15);
  EXPECT_EQ(code_of([] { msnr_to_r2(1.0); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { msnr_to_r2(0.5); }), ErrorCode::OutOfRange);
}

TEST(MsnrToR2, ConsistentFormMatchesMonteCarloSquaredCorrelation) {
  // y = x + s z with independent z: the squared correlation of f(x) and y
  // should match 1 - 1/msnr at the realized ratio.
  const Index n = 200'000;
  const Vector x = sample_x(n, 31);
  const double s = std::sqrt((1.0 / 12.0) / (11.529 - 1.0));
  const Vector e = s * standard_normal(n, 32);
  const Vector y = x + e;
  const double realized = oracle::variance(y) / oracle::variance(e);
  const double r = oracle::pearson(x, y);
  EXPECT_NEAR(msnr_to_r2(realized), r * r, 0.005);
  EXPECT_NEAR(msnr_to_r2(11.529), r * r, 0.005);
  // The printed form tracks |r| instead.
  EXPECT_NEAR(msnr_to_r2(realized, R2Form::Printed), std::abs(r), 0.005);
}

TEST(Heuristic, TraceIsMonotoneAndMatchesReturnedDraw) {
  const Vector signal = eval_relation(Relation::SineLow, sample_x(1000, 41));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const HeuristicNoise h = heuristic_ssnr_noise(signal, 10.471, 100, 0.03, seed);
    ASSERT_EQ(static_cast<int>(h.best_delta.size()), h.steps);
    EXPECT_LE(h.steps, 100);
    for (std::size_t i = 1; i < h.best_delta.size(); ++i) EXPECT_LE(h.best_delta[i], h.best_delta[i - 1]);
    const double recomputed = signal.squaredNorm() / h.noise.squaredNorm();
    EXPECT_NEAR(h.achieved, recomputed, 1e-12 * recomputed);
    EXPECT_DOUBLE_EQ(std::abs(h.achieved - 10.471), h.best_delta.back());
    if (h.steps < 100) EXPECT_LE(h.best_delta.back(), 0.03);
  }
}

TEST(Heuristic, UsesAtMostMaxStepsDraws) {
  const Vector signal = eval_relation(Relation::Line, sample_x(50, 42));
  const HeuristicNoise h = heuristic_ssnr_noise(signal, 3.0, 5, 1e-12, 1);
  EXPECT_EQ(h.steps, 5);
  EXPECT_EQ(h.best_delta.size(), 5u);
}

TEST(Heuristic, NoisyObjectiveScoresTheNoisySignal) {
  const Vector signal = eval_relation(Relation::Cubic, sample_x(500, 43));
  const HeuristicNoise h = heuristic_ssnr_noise(signal, 8.0, 100, 0.03, 3, SsnrObjective::NoisySignal);
  const double recomputed = (signal + h.noise).squaredNorm() / h.noise.squaredNorm();
  EXPECT_NEAR(h.achieved, recomputed, 1e-12 * recomputed);
  EXPECT_LT(std::abs(h.achieved - 8.0), 0.5);
}

TEST(Heuristic, ReachesToleranceInMostRuns) {
  const Vector signal = eval_relation(Relation::Line, sample_x(1000, 44));
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    hits += heuristic_ssnr_noise(signal, 10.471, 100, 0.03, seed).best_delta.back() <= 0.03;
  EXPECT_GE(hits, 45);
}

TEST(Heuristic, RejectsBadArguments) {
  const Vector signal = Vector::Ones(10);
  EXPECT_EQ(code_of([&] { heuristic_ssnr_noise(signal, 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { heuristic_ssnr_noise(signal, -1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { heuristic_ssnr_noise(Vector::Zero(10), 2.0); }), ErrorCode::DegenerateSignal);
}

TEST(ExactAdjust, HandWorkedQuadratic) {
  // e^2 - 2e - 2.75 = 0 has roots 1 -+ sqrt(3.75); the smaller magnitude one is kept.
  const Vector adjusted = exact_ssnr_adjust(vec({1, 1}), vec({0.5, 123.0}), 2.0);
  EXPECT_EQ(adjusted[0], 0.5);
  EXPECT_NEAR(adjusted[1], 1.0 - std::sqrt(3.75), 1e-14);
  EXPECT_NEAR(ssnr((vec({1, 1}) + adjusted).eval(), adjusted), 2.0, 1e-14);
}

TEST(ExactAdjust, NegativeDiscriminantHasNoRealRoot) {
  const Vector signal = vec({0, 1});
  const Vector noise = vec({10, 0});
  const double target = 2.0;
  // oracle: discriminant of (t-1)e^2 - 2 f e + c with c = t*100 - 100 - 1
  const double c = target * 100.0 - 100.0 - 1.0;
  ASSERT_LT(4.0 - 4.0 * (target - 1.0) * c, 0.0);
  EXPECT_EQ(code_of([&] { exact_ssnr_adjust(signal, noise, target); }), ErrorCode::NoRealRoot);
}

TEST(ExactAdjust, UnitTargetIsLinear) {
  const Vector signal = vec({0.4, -1.2, 2.0});
  const Vector noise = vec({0.3, 0.1, 0.7});
  const Vector adjusted = exact_ssnr_adjust(signal, noise, 1.0);
  EXPECT_NEAR(ssnr((signal + adjusted).eval(), adjusted), 1.0, 1e-12);
}

TEST(ExactAdjust, RandomInstancesHitTheTarget) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> target_dist(1.5, 30.0);
  int solved = 0;
  for (int instance = 0; instance < 200; ++instance) {
    const Vector signal = eval_relation(Relation::SineHigh, sample_x(200, derive_seed(5, instance)));
    const double target = target_dist(rng);
    const HeuristicNoise h = heuristic_ssnr_noise(signal, target, 100, 0.03, derive_seed(6, instance),
                                                  SsnrObjective::NoisySignal);
    // (t - 1) e^2 - 2 f e + c = 0 for the last component e.
    const double f = signal[199];
    const double c = target * h.noise.head(199).squaredNorm() - (signal + h.noise).head(199).squaredNorm() - f * f;
    const double discriminant = 4.0 * f * f - 4.0 * (target - 1.0) * c;
    try {
      const Vector adjusted = exact_ssnr_adjust(signal, h.noise, target);
      EXPECT_EQ(adjusted.head(199), h.noise.head(199));
      const double achieved = (signal + adjusted).squaredNorm() / adjusted.squaredNorm();
      EXPECT_NEAR(achieved, target, 1e-9 * target);
      EXPECT_GE(discriminant, 0.0);
      ++solved;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NoRealRoot);
      EXPECT_LT(discriminant, 0.0);
    }
  }
  // Draws at or above the target always admit a root; those below usually do not.
  EXPECT_GE(solved, 60);
}

TEST(MakeNoisy, SsnrRouteIsExactWithoutOutliers) {
  const NoiseTarget target = NoiseTarget::ssnr(10.471);
  for (const RelationSpec& spec : list_relations()) {
    const NoisyDataset d = generate_dataset(spec.id, 500, target, derive_seed(7, spec.name));
    EXPECT_NEAR(d.achieved_ratio, 10.471, 1e-9 * 10.471) << spec.name;
    EXPECT_NEAR(ssnr(d.y, d.noise), 10.471, 1e-9 * 10.471);
    // The exact solve only nudges the final value: it stays within the bulk.
    const double rms = std::sqrt(d.noise.squaredNorm() / 500.0);
    EXPECT_LT(std::abs(d.noise[499]), 5.0 * rms) << spec.name;
  }
}

TEST(MakeNoisy, MsnrRouteRejectsRatiosAtOrBelowOne) {
  EXPECT_EQ(code_of([] { generate_dataset(Relation::Line, 50, NoiseTarget::msnr(1.0), 1); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { generate_dataset(Relation::Line, 50, NoiseTarget::msnr(0.75), 1); }), ErrorCode::OutOfRange);
}

TEST(MakeNoisy, MsnrRouteNearlySharesTheRealizedRatioAcrossRelations) {
  // The noise is projected off f(x) as well, which moves each relation's
  // realized ratio by O(1/n) relative to the reference.
  const Index n = 400;
  const Vector x = sample_x(n, 51);
  const Vector z = standard_normal(n, 52);
  const NoiseTarget target = NoiseTarget::msnr(11.529);
  const double reference = make_noisy(Relation::Line, x, z, target, 1).achieved_ratio;
  for (const RelationSpec& spec : list_relations())
    EXPECT_NEAR(make_noisy(spec.id, x, z, target, 1).achieved_ratio, reference, 0.05 * reference) << spec.name;
}

TEST(MakeNoisy, MsnrSmallSampleSpreadFollowsVarianceOfVarianceOracle) {
  // For Line, R = 1 + V_x / V_e where V_x is the sample variance of n draws
  // of U(0,1) and V_e = s^2 chi2_nu / (n - 1) with nu = n - 2 (the noise is
  // projected off the constant and x), s^2 = (1/12) / (T - 1).
  const int n = 100;
  const double t = 11.5;
  const double nu = n - 2.0;
  const double sigma2 = 1.0 / 12.0;
  const double s2 = sigma2 / (t - 1.0);
  const double var_vx = sigma2 * sigma2 * (2.0 / (n - 1.0) + (1.8 - 3.0) / n);
  const double inv_ve = (n - 1.0) / (s2 * (nu - 2.0));
  const double inv_ve2 = (n - 1.0) * (n - 1.0) / (s2 * s2 * (nu - 2.0) * (nu - 4.0));
  const double mean_oracle = 1.0 + sigma2 * inv_ve;
  const double sd_oracle = std::sqrt((var_vx + sigma2 * sigma2) * inv_ve2 - (sigma2 * inv_ve) * (sigma2 * inv_ve));

  // Fraction inside +-20% from an independent simulation of the same model.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::chi_squared_distribution<double> chi(nu);
  int model_within = 0;
  const int model_runs = 20000;
  for (int r = 0; r < model_runs; ++r) {
    Vector u(n);
    for (int i = 0; i < n; ++i) u[i] = unif(rng);
    const double ratio = 1.0 + oracle::variance(u) / (s2 * chi(rng) / (n - 1.0));
    model_within += std::abs(ratio - t) <= 0.2 * t;
  }
  const double expected_fraction = static_cast<double>(model_within) / model_runs;

  const int runs = 400;
  std::vector<double> ratios;
  int within_20 = 0;
  for (int s = 0; s < runs; ++s) {
    const double r =
        generate_dataset(Relation::Line, n, NoiseTarget::msnr(t), static_cast<std::uint64_t>(s)).achieved_ratio;
    ratios.push_back(r);
    within_20 += std::abs(r - t) <= 0.2 * t;
  }
  double mean = 0, var = 0;
  for (double r : ratios) mean += r / runs;
  for (double r : ratios) var += (r - mean) * (r - mean) / (runs - 1);
  EXPECT_NEAR(mean, mean_oracle, 4.0 * sd_oracle / std::sqrt(static_cast<double>(runs)));
  EXPECT_NEAR(std::sqrt(var), sd_oracle, 0.15 * sd_oracle);
  EXPECT_NEAR(static_cast<double>(within_20) / runs, expected_fraction, 0.07);
}

TEST(StandardNormal, DeterministicAndStandardized) {
  EXPECT_EQ(standard_normal(10, 3), standard_normal(10, 3));
  const Vector z = standard_normal(100000, 4);
  EXPECT_NEAR(z.mean(), 0.0, 0.02);
  EXPECT_NEAR(oracle::variance(z), 1.0, 0.02);
}
