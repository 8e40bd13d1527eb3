#include "equibench/relations.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "equibench/error.hpp"

namespace equibench {
namespace {

using std::numbers::pi;

constexpr std::array<RelationSpec, kRelationCount> kCatalog{{
    {Relation::Line, "line", "Line", "y = x", true},
    {Relation::LinearPeriodicLow, "linear_periodic_low", "Linear+Periodic, Low Freq",
     "y = 0.2 sin(4(2x-1)) + 11/10 (2x-1)", false},
    {Relation::LinearPeriodicMedium, "linear_periodic_medium", "Linear+Periodic, Medium Freq",
     "y = sin(10 pi x) + x", false},
    {Relation::LinearPeriodicHigh1, "linear_periodic_high_1", "Linear+Periodic, High Freq",
     "y = 0.1 sin(10.6(2x-1)) + 11/10 (2x-1)", false},
    {Relation::LinearPeriodicHigh2, "linear_periodic_high_2", "Linear+Periodic, High Freq 2",
     "y = 0.2 sin(10.6(2x-1)) + 11/10 (2x-1)", false},
    {Relation::NonFourierCosineLow, "non_fourier_cosine_low", "Non-Fourier Freq [Low] Cosine", "y = cos(7 pi x)",
     false},
    {Relation::CosineHigh, "cosine_high", "Cosine, High Freq", "y = cos(14 pi x)", false},
    {Relation::Cubic, "cubic", "Cubic", "y = 4x^3 + x^2 - 4x", false},
    {Relation::CubicYStretched, "cubic_y_stretched", "Cubic, Y-stretched", "y = 41(4x^3 + x^2 - 4x)", false},
    {Relation::LShaped, "l_shaped", "L-shaped", "y = x/99 I(x <= 99/100) + I(x > 99/100)", false},
    {Relation::Exp2x, "exp_2x", "Exponential [2^x]", "y = 2^x", true},
    {Relation::Exp10x, "exp_10x", "Exponential [10^x]", "y = 10^x", true},
    {Relation::Parabola, "parabola", "Parabola", "y = 4x^2", false},
    {Relation::NonFourierSineLow, "non_fourier_sine_low", "Non-Fourier Freq [Low] Sine", "y = sin(9 pi x)", false},
    {Relation::SineLow, "sine_low", "Sine, Low Freq", "y = sin(8 pi x)", false},
    {Relation::SineHigh, "sine_high", "Sine, High Freq", "y = sin(16 pi x)", false},
    {Relation::Sigmoid, "sigmoid", "Sigmoid", "y = [50(x-0.5)+0.5] I(1/20 <= x <= 51/100) + I(x > 51/100)", false},
    {Relation::VaryingFreqCosine, "varying_freq_cosine", "Varying Freq [Medium] Cosine", "y = sin(5 pi x(1+x))",
     false},
    {Relation::VaryingFreqSine, "varying_freq_sine", "Varying Freq [Medium] Sine", "y = sin(6 pi x(1+x))", false},
    {Relation::Spike, "spike", "Spike",
     "y = 20 I(x < 1/20) + (-18x + 19/10) I(1/20 <= x < 1/10) + (-x/9 + 1/9) I(x >= 1/10)", false},
    {Relation::LopsidedLShaped, "lopsided_l_shaped", "Lopsided L-shaped",
     "y = 200x I(x < 1/200) + (-198x + 199/100) I(1/200 <= x < 1/100) + (-x/99 + 1/99) I(x >= 1/100)", false},
}};

double linear_periodic(double amplitude, double frequency, double x) {
  const double u = 2.0 * x - 1.0;
  return amplitude * std::sin(frequency * u) + 1.1 * u;
}

}  // namespace

std::span<const RelationSpec, kRelationCount> list_relations() noexcept { return kCatalog; }

const RelationSpec& relation_spec(Relation id) noexcept { return kCatalog[static_cast<std::size_t>(id)]; }

std::string_view to_string(Relation id) noexcept { return relation_spec(id).name; }

std::optional<Relation> parse_relation(std::string_view name) noexcept {
  for (const auto& spec : kCatalog)
    if (spec.name == name) return spec.id;
  return std::nullopt;
}

double eval_relation(Relation id, double x) noexcept {
  switch (id) {
    case Relation::Line: return x;
    case Relation::LinearPeriodicLow: return linear_periodic(0.2, 4.0, x);
    case Relation::LinearPeriodicMedium: return std::sin(10.0 * pi * x) + x;
    case Relation::LinearPeriodicHigh1: return linear_periodic(0.1, 10.6, x);
    case Relation::LinearPeriodicHigh2: return linear_periodic(0.2, 10.6, x);
    case Relation::NonFourierCosineLow: return std::cos(7.0 * pi * x);
    case Relation::CosineHigh: return std::cos(14.0 * pi * x);
    case Relation::Cubic: return 4.0 * x * x * x + x * x - 4.0 * x;
    case Relation::CubicYStretched: return 41.0 * (4.0 * x * x * x + x * x - 4.0 * x);
    case Relation::LShaped: return x <= 99.0 / 100.0 ? x / 99.0 : 1.0;
    case Relation::Exp2x: return std::exp2(x);
    case Relation::Exp10x: return std::pow(10.0, x);
    case Relation::Parabola: return 4.0 * x * x;
    case Relation::NonFourierSineLow: return std::sin(9.0 * pi * x);
    case Relation::SineLow: return std::sin(8.0 * pi * x);
    case Relation::SineHigh: return std::sin(16.0 * pi * x);
    case Relation::Sigmoid:
      if (x > 51.0 / 100.0) return 1.0;
      if (x >= 1.0 / 20.0) return 50.0 * (x - 0.5) + 0.5;
      return 0.0;
    case Relation::VaryingFreqCosine: return std::sin(5.0 * pi * x * (1.0 + x));
    case Relation::VaryingFreqSine: return std::sin(6.0 * pi * x * (1.0 + x));
    case Relation::Spike:
      if (x < 1.0 / 20.0) return 20.0;
      if (x < 1.0 / 10.0) return -18.0 * x + 19.0 / 10.0;
      return -x / 9.0 + 1.0 / 9.0;
    case Relation::LopsidedLShaped:
      if (x < 1.0 / 200.0) return 200.0 * x;
      if (x < 1.0 / 100.0) return -198.0 * x + 199.0 / 100.0;
      return -x / 99.0 + 1.0 / 99.0;
  }
  return x;
}

Vector eval_relation(Relation id, VectorRef x) {
  return x.unaryExpr([id](double v) { return eval_relation(id, v); });
}

Vector sample_x(Index n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "sample_x needs n >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(n);
  for (Index i = 0; i < n; ++i) x[i] = unit(rng);
  return x;
}

}  // namespace equibench
