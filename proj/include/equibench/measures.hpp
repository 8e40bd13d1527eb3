#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "equibench/ace.hpp"
#include "equibench/correlation.hpp"
#include "equibench/distance_correlation.hpp"
#include "equibench/hhg.hpp"
#include "equibench/hsic.hpp"
#include "equibench/mic.hpp"
#include "equibench/mutual_information.hpp"
#include "equibench/rdc.hpp"
#include "equibench/types.hpp"

namespace equibench {

/// Measure identifiers. Cdc and CurveCor are slots without a built-in
/// estimator; they score only after install_measure_plugin().
enum class MeasureKind : std::uint8_t { Pcor, Scor, Kcor, Dcor, Hsic, Mi, Mic, Rdc, Ace, Hhg, Cdc, CurveCor };

inline constexpr std::array<MeasureKind, 10> kBuiltinMeasures{
    MeasureKind::Pcor, MeasureKind::Scor, MeasureKind::Kcor, MeasureKind::Dcor, MeasureKind::Hsic,
    MeasureKind::Mi,   MeasureKind::Mic,  MeasureKind::Rdc,  MeasureKind::Ace,  MeasureKind::Hhg};

std::string_view to_string(MeasureKind kind) noexcept;
std::optional<MeasureKind> parse_measure(std::string_view name) noexcept;

struct MeasureParams {
  int mi_k = 6;
  bool mi_normalized = false;
  double mic_alpha = 0.6;
  int mic_clumps = 15;
  int rdc_k = 20;
  double rdc_s = 1.0 / 6.0;
  int ace_max_iter = 100;
  double ace_tol = 1e-6;
  Index hhg_cap = kDefaultHhgCap;

  /// Applies an override such as ("mi.k", "6"). Throws InvalidArgument on an
  /// unknown key or a malformed value.
  void set(std::string_view key, std::string_view value);

  /// Parameters relevant to one measure, e.g. "k=6;normalized=0".
  std::string describe(MeasureKind kind) const;
};

struct MeasureScore {
  MeasureKind measure;
  double value;
  Index n;
  std::string params;
};

/// D[x; y]. `seed` is only consumed by randomized measures (rdc).
double score(MeasureKind kind, VectorRef x, VectorRef y, const MeasureParams& params = {}, std::uint64_t seed = 0);

MeasureScore score_measure(MeasureKind kind, VectorRef x, VectorRef y, const MeasureParams& params = {},
                           std::uint64_t seed = 0);

using MeasurePlugin = std::function<double(VectorRef x, VectorRef y, std::uint64_t seed)>;

/// Fills the Cdc or CurveCor slot. Not synchronised with concurrent scoring;
/// install plugins before starting experiments.
void install_measure_plugin(MeasureKind slot, MeasurePlugin plugin);

/// Scores (x, y[perm]) for many permutations of one dataset. Measures whose
/// statistic can reuse per-dataset work (Gram matrices, distance orderings,
/// standardised vectors) precompute it once here. Instances are immutable
/// and safe to share between threads.
class PermutationScorer {
 public:
  virtual ~PermutationScorer() = default;
  virtual double operator()(std::span<const Index> perm) const = 0;
};

std::unique_ptr<PermutationScorer> make_permutation_scorer(MeasureKind kind, VectorRef x, VectorRef y,
                                                           const MeasureParams& params = {}, std::uint64_t seed = 0);

}  // namespace equibench
