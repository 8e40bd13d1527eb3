#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "equibench/error.hpp"
#include "equibench/relations.hpp"

using namespace equibench;

TEST(Relations, CatalogHasTwentyOneEntriesInOrder) {
  const auto list = list_relations();
  ASSERT_EQ(list.size(), 21u);
  EXPECT_EQ(list.front().id, Relation::Line);
  EXPECT_EQ(list.back().id, Relation::LopsidedLShaped);
  for (std::size_t i = 0; i < list.size(); ++i) EXPECT_EQ(static_cast<std::size_t>(list[i].id), i);
}

TEST(Relations, NamesAreUniqueAndRoundTrip) {
  std::set<std::string> names;
  for (const RelationSpec& spec : list_relations()) {
    names.insert(std::string(spec.name));
    const auto parsed = parse_relation(spec.name);
    ASSERT_TRUE(parsed.has_value()) << spec.name;
    EXPECT_EQ(*parsed, spec.id);
    EXPECT_EQ(to_string(spec.id), spec.name);
    EXPECT_FALSE(spec.formula.empty());
  }
  EXPECT_EQ(names.size(), 21u);
  EXPECT_FALSE(parse_relation("nosuch").has_value());
  EXPECT_EQ(*parse_relation("lopsided_l_shaped"), Relation::LopsidedLShaped);
}

TEST(Relations, OnlyLineAndExponentialsAreStrictlyIncreasing) {
  for (const RelationSpec& spec : list_relations()) {
    const bool expected = spec.id == Relation::Line || spec.id == Relation::Exp2x || spec.id == Relation::Exp10x;
    EXPECT_EQ(spec.strictly_increasing, expected) << spec.name;
  }
}

TEST(Relations, HandEvaluatedPoints) {
  const double pi = std::numbers::pi;
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Line, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Parabola, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Spike, 0.04), 20.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Cubic, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::CubicYStretched, 1.0), 41.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Exp2x, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Exp10x, 1.0), 10.0);
  EXPECT_NEAR(eval_relation(Relation::Exp10x, 0.5), std::sqrt(10.0), 1e-15);
  EXPECT_NEAR(eval_relation(Relation::LinearPeriodicLow, 0.75), 0.2 * std::sin(2.0) + 0.55, 1e-15);
  EXPECT_NEAR(eval_relation(Relation::LinearPeriodicMedium, 0.05), std::sin(0.5 * pi) + 0.05, 1e-15);
  EXPECT_NEAR(eval_relation(Relation::LinearPeriodicHigh1, 1.0), 0.1 * std::sin(10.6) + 1.1, 1e-15);
  EXPECT_NEAR(eval_relation(Relation::LinearPeriodicHigh2, 1.0), 0.2 * std::sin(10.6) + 1.1, 1e-15);
  EXPECT_NEAR(eval_relation(Relation::NonFourierCosineLow, 1.0 / 7.0), -1.0, 1e-15);
  EXPECT_NEAR(eval_relation(Relation::CosineHigh, 1.0 / 14.0), -1.0, 1e-15);
  EXPECT_NEAR(eval_relation(Relation::NonFourierSineLow, 1.0 / 18.0), 1.0, 1e-15);
  EXPECT_NEAR(eval_relation(Relation::SineLow, 1.0 / 16.0), 1.0, 1e-15);
  EXPECT_NEAR(eval_relation(Relation::SineHigh, 1.0 / 32.0), 1.0, 1e-15);
  EXPECT_NEAR(eval_relation(Relation::VaryingFreqCosine, 0.5), std::sin(3.75 * pi), 1e-14);
  EXPECT_NEAR(eval_relation(Relation::VaryingFreqSine, 0.5), std::sin(4.5 * pi), 1e-14);
}

TEST(Relations, PiecewiseBoundariesFollowTheStatedInequalities) {
  // L-shaped: x/99 when x <= 99/100, else 1
  EXPECT_DOUBLE_EQ(eval_relation(Relation::LShaped, 0.99), 0.99 / 99.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::LShaped, std::nextafter(0.99, 1.0)), 1.0);
  // Sigmoid: middle branch on [1/20, 51/100], 1 above, 0 below
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Sigmoid, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Sigmoid, 0.05), 50.0 * (0.05 - 0.5) + 0.5);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Sigmoid, 0.51), 50.0 * (0.51 - 0.5) + 0.5);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Sigmoid, std::nextafter(0.51, 1.0)), 1.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Sigmoid, std::nextafter(0.05, 0.0)), 0.0);
  // Spike: 20 below 1/20; the middle branch starts at 1/20; the tail at 1/10
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Spike, std::nextafter(0.05, 0.0)), 20.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Spike, 0.05), -18.0 * 0.05 + 1.9);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Spike, 0.1), -0.1 / 9.0 + 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::Spike, std::nextafter(0.1, 0.0)), -18.0 * std::nextafter(0.1, 0.0) + 1.9);
  // Lopsided L: 200x below 1/200, middle to 1/100, tail from 1/100
  EXPECT_DOUBLE_EQ(eval_relation(Relation::LopsidedLShaped, 0.004), 0.8);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::LopsidedLShaped, 0.005), -198.0 * 0.005 + 1.99);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::LopsidedLShaped, 0.01), -0.01 / 99.0 + 1.0 / 99.0);
  EXPECT_DOUBLE_EQ(eval_relation(Relation::LopsidedLShaped, 1.0), 0.0);
}

TEST(Relations, TotalAndDeterministicOnUnitInterval) {
  const Vector grid = Vector::LinSpaced(10001, 0.0, 1.0);
  for (const RelationSpec& spec : list_relations()) {
    const Vector a = eval_relation(spec.id, grid);
    const Vector b = eval_relation(spec.id, grid);
    EXPECT_TRUE(a.allFinite()) << spec.name;
    EXPECT_EQ(a, b) << spec.name;
    for (Index i = 0; i < grid.size(); i += 997) EXPECT_EQ(a[i], eval_relation(spec.id, grid[i]));
  }
}

TEST(Relations, StrictlyIncreasingFlagHoldsOnGrid) {
  const Vector grid = Vector::LinSpaced(2001, 0.0, 1.0);
  for (Relation r : {Relation::Line, Relation::Exp2x, Relation::Exp10x}) {
    const Vector f = eval_relation(r, grid);
    for (Index i = 1; i < f.size(); ++i) ASSERT_LT(f[i - 1], f[i]);
  }
}

TEST(SampleX, DeterministicUniformAndValidated) {
  EXPECT_EQ(sample_x(5, 42), sample_x(5, 42));
  EXPECT_NE(sample_x(5, 42), sample_x(5, 43));
  const Vector x = sample_x(10000, 7);
  EXPECT_NEAR(x.mean(), 0.5, 0.02);
  EXPECT_GE(x.minCoeff(), 0.0);
  EXPECT_LE(x.maxCoeff(), 1.0);
  EXPECT_THROW(sample_x(1, 3), Error);
}
