#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "equibench/types.hpp"

namespace equibench {

/// The 21 benchmark relationships, in catalog order.
enum class Relation : std::uint8_t {
  Line,
  LinearPeriodicLow,
  LinearPeriodicMedium,
  LinearPeriodicHigh1,
  LinearPeriodicHigh2,
  NonFourierCosineLow,
  CosineHigh,
  Cubic,
  CubicYStretched,
  LShaped,
  Exp2x,
  Exp10x,
  Parabola,
  NonFourierSineLow,
  SineLow,
  SineHigh,
  Sigmoid,
  VaryingFreqCosine,
  VaryingFreqSine,
  Spike,
  LopsidedLShaped,
};

inline constexpr std::size_t kRelationCount = 21;

struct RelationSpec {
  Relation id;
  std::string_view name;          // snake-case identifier used on the CLI and in CSVs
  std::string_view display_name;
  std::string_view formula;
  bool strictly_increasing;       // on [0, 1]; eligible for the self-equitability probe
};

/// All relations in catalog order.
std::span<const RelationSpec, kRelationCount> list_relations() noexcept;

const RelationSpec& relation_spec(Relation id) noexcept;
std::string_view to_string(Relation id) noexcept;
std::optional<Relation> parse_relation(std::string_view name) noexcept;

/// Noise-free f(x). Total on the reals; the catalog is designed for x in [0, 1].
double eval_relation(Relation id, double x) noexcept;
Vector eval_relation(Relation id, VectorRef x);

/// n iid draws from U(0, 1); deterministic for a fixed seed. Requires n >= 2.
Vector sample_x(Index n, std::uint64_t seed);

}  // namespace equibench
