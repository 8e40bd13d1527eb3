#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "equibench/independence.hpp"
#include "equibench/measures.hpp"
#include "equibench/noise.hpp"
#include "equibench/relations.hpp"

namespace equibench {

/// The 17 relations left after dropping sigmoid, lopsided L-shaped, L-shaped
/// and spike, whose scores sit apart from the rest for most measures.
std::vector<Relation> default_spread_subset();

std::vector<Relation> all_relations();

struct ExperimentConfig {
  std::vector<Relation> relations = all_relations();
  std::vector<MeasureKind> measures{kBuiltinMeasures.begin(), kBuiltinMeasures.end()};
  /// The score experiment uses the first level; the power experiment sweeps all.
  std::vector<NoiseTarget> noise{NoiseTarget::msnr(11.529)};
  Index n = 500;
  /// HHG is scored on the first hhg_n points when n is larger.
  Index hhg_n = 256;
  int score_reps = 50;
  int power_reps = 100;
  double alpha = 0.05;
  int permutations = 200;
  std::uint64_t base_seed = 0;
  MeasureParams params;
  std::vector<Relation> spread_subset = default_spread_subset();
  bool null_injection = false;
  bool shared_lambda = false;
  int threads = 1;

  /// Every violated precondition, in a stable order; empty when valid.
  std::vector<std::string> validate() const;
};

struct ScoreCell {
  MeasureKind measure = MeasureKind::Pcor;
  Relation relation = Relation::Line;
  int rep = 0;
  std::optional<double> score;  // missing when the cell failed
  double achieved_ratio = 0.0;
  std::string failure;
};

struct AchievedCell {
  Relation relation = Relation::Line;
  int rep = 0;
  double achieved_ratio = 0.0;
};

struct EquitabilityTable {
  NoiseTarget noise;
  /// Ordered by (measure, relation, rep) following the configuration lists.
  std::vector<ScoreCell> scores;
  std::vector<AchievedCell> achieved;
  std::vector<std::string> failures;
};

/// Score experiment: per rep one x and one standard-normal draw shared by all
/// relations, each relation made noisy at the first configured level, then
/// every measure scored. Cell values depend only on (base_seed, measure,
/// relation, rep), never on list positions or thread count.
EquitabilityTable run_equitability(const ExperimentConfig& config);

struct RelationSummary {
  MeasureKind measure = MeasureKind::Pcor;
  Relation relation = Relation::Line;
  double mean = 0.0;
  double sd = 0.0;
  int count = 0;
};

struct MeasureSpread {
  MeasureKind measure = MeasureKind::Pcor;
  int relations = 0;
  double spread_sd = 0.0;     // sd (n - 1) of per-relation means
  double spread_range = 0.0;  // max - min of per-relation means
  std::optional<double> subset_sd;
};

struct EquitabilityReport {
  std::vector<RelationSummary> per_relation;
  std::vector<MeasureSpread> per_measure;
};

/// Per-relation means and their spread for each measure. Missing cells are
/// skipped. `subset` defaults to default_spread_subset(); subset_sd is unset
/// when no subset relation is present.
EquitabilityReport equitability_spread(std::span<const ScoreCell> scores,
                                       std::optional<std::span<const Relation>> subset = std::nullopt);

/// Power experiment: estimate_power for every (measure, relation, level).
/// Data seeds depend on (relation, level) only, so all measures see the same
/// datasets. A cell that fails outright comes back with reps_completed = 0
/// and its failure message.
std::vector<PowerEstimate> run_power_equitability(const ExperimentConfig& config);

/// Sample standard deviation of power across relations, per measure, for one
/// noise level. Cells without completed reps are skipped.
double power_spread(std::span<const PowerEstimate> table, MeasureKind measure, const NoiseTarget& level);

struct SelfEquitability {
  double mean_delta = 0.0;
  double sd_delta = 0.0;
  int reps = 0;
};

/// Mean and sd of |D[x; y] - D[f(x); y]| over reps with y = f(x) + e at
/// `noise`. Only strictly increasing relations qualify (line, exp_2x,
/// exp_10x); others throw InvalidArgument.
SelfEquitability self_equitability_check(MeasureKind measure, Relation relation, Index n, int reps,
                                         std::uint64_t seed, const NoiseTarget& noise = NoiseTarget::msnr(11.529),
                                         const MeasureParams& params = {});

}  // namespace equibench
