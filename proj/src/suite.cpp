#include "equibench/suite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "equibench/parallel.hpp"
#include "equibench/seed.hpp"
#include "equibench/stats.hpp"

namespace equibench {

std::vector<Relation> all_relations() {
  std::vector<Relation> out;
  for (const RelationSpec& spec : list_relations()) out.push_back(spec.id);
  return out;
}

std::vector<Relation> default_spread_subset() {
  std::vector<Relation> out;
  for (const RelationSpec& spec : list_relations()) {
    switch (spec.id) {
      case Relation::Sigmoid:
      case Relation::LopsidedLShaped:
      case Relation::LShaped:
      case Relation::Spike:
        break;
      default:
        out.push_back(spec.id);
    }
  }
  return out;
}

namespace {

template <typename T>
bool has_duplicates(const std::vector<T>& values) {
  std::set<T> seen(values.begin(), values.end());
  return seen.size() != values.size();
}

std::string describe_level(const NoiseTarget& level) {
  std::ostringstream os;
  os << to_string(level.kind) << '=' << level.ratio;
  return os.str();
}

// Scored prefix length for a measure inside the experiments.
Index experiment_size(const ExperimentConfig& config, MeasureKind measure) {
  if (measure != MeasureKind::Hhg) return config.n;
  return std::min({config.n, config.hhg_n, config.params.hhg_cap});
}

}  // namespace

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> errors;
  if (relations.empty()) errors.emplace_back("relations: at least one relation is required");
  if (has_duplicates(relations)) errors.emplace_back("relations: duplicate entries");
  if (measures.empty()) errors.emplace_back("measures: at least one measure is required");
  if (has_duplicates(measures)) errors.emplace_back("measures: duplicate entries");
  if (noise.empty()) errors.emplace_back("noise: at least one level is required");
  for (const NoiseTarget& level : noise) {
    try {
      level.validate();
      if (level.kind == NoiseKind::Msnr && !(level.ratio > 1.0))
        errors.push_back("noise: " + describe_level(level) + " must exceed 1 for msnr");
    } catch (const Error& e) {
      errors.push_back("noise: " + describe_level(level) + ": " + e.what());
    }
  }
  if (n < 20) errors.emplace_back("n: must be at least 20");
  if (hhg_n < 4) errors.emplace_back("hhg_n: must be at least 4");
  if (params.hhg_cap < 4 || params.hhg_cap > kDefaultHhgCap)
    errors.push_back("hhg.cap: must lie in [4, " + std::to_string(kDefaultHhgCap) + "]");
  if (score_reps < 2) errors.emplace_back("score_reps: must be at least 2");
  if (power_reps < 30) errors.emplace_back("power_reps: must be at least 30");
  if (!(alpha > 0.0 && alpha < 1.0)) errors.emplace_back("alpha: must lie in (0, 1)");
  if (permutations < 20) errors.emplace_back("permutations: must be at least 20");
  if (threads < 1) errors.emplace_back("threads: must be at least 1");
  return errors;
}

EquitabilityTable run_equitability(const ExperimentConfig& config) {
  if (const auto errors = config.validate(); !errors.empty())
    throw Error(ErrorCode::InvalidArgument, "invalid experiment config: " + errors.front());

  EquitabilityTable table;
  table.noise = config.noise.front();
  const std::size_t relation_count = config.relations.size();
  const auto reps = static_cast<std::size_t>(config.score_reps);
  const std::uint64_t base = config.base_seed;

  // Stage 1: one dataset per (relation, rep).
  struct Generated {
    std::optional<NoisyDataset> data;
    std::string failure;
  };
  std::vector<Generated> generated(relation_count * reps);
  parallel_for(generated.size(), config.threads, [&](std::size_t cell) {
    const Relation relation = config.relations[cell / reps];
    const int rep = static_cast<int>(cell % reps);
    try {
      const Vector x = sample_x(config.n, derive_seed(base, "score-x", rep));
      const Vector z = standard_normal(config.n, derive_seed(base, "score-noise", rep));
      generated[cell].data =
          make_noisy(relation, x, z, table.noise, derive_seed(base, "score-ssnr", to_string(relation), rep));
    } catch (const std::exception& e) {
      generated[cell].failure = std::string(to_string(relation)) + " rep " + std::to_string(rep) + ": " + e.what();
    }
  });
  for (std::size_t cell = 0; cell < generated.size(); ++cell) {
    const Generated& g = generated[cell];
    if (g.data) {
      table.achieved.push_back({g.data->relation, static_cast<int>(cell % reps), g.data->achieved_ratio});
    } else {
      table.failures.push_back("generate " + g.failure);
    }
  }

  // Stage 2: every measure on every dataset.
  const std::size_t per_measure = relation_count * reps;
  table.scores.resize(config.measures.size() * per_measure);
  parallel_for(table.scores.size(), config.threads, [&](std::size_t index) {
    const MeasureKind measure = config.measures[index / per_measure];
    const std::size_t cell = index % per_measure;
    ScoreCell& out = table.scores[index];
    out.measure = measure;
    out.relation = config.relations[cell / reps];
    out.rep = static_cast<int>(cell % reps);
    const Generated& g = generated[cell];
    if (!g.data) {
      out.failure = "dataset unavailable";
      return;
    }
    out.achieved_ratio = g.data->achieved_ratio;
    const Index m = experiment_size(config, measure);
    try {
      out.score = score(measure, g.data->x.head(m), g.data->y.head(m), config.params,
                        derive_seed(base, "score-measure", to_string(measure), to_string(out.relation), out.rep));
    } catch (const std::exception& e) {
      out.failure = e.what();
    }
  });
  for (const ScoreCell& cell : table.scores) {
    if (!cell.score && !cell.failure.empty() && cell.failure != "dataset unavailable") {
      table.failures.push_back("score " + std::string(to_string(cell.measure)) + " " +
                               std::string(to_string(cell.relation)) + " rep " + std::to_string(cell.rep) + ": " +
                               cell.failure);
    }
  }
  return table;
}

EquitabilityReport equitability_spread(std::span<const ScoreCell> scores,
                                       std::optional<std::span<const Relation>> subset) {
  const std::vector<Relation> default_subset = default_spread_subset();
  const std::span<const Relation> chosen = subset ? *subset : std::span<const Relation>(default_subset);
  const std::set<Relation> in_subset(chosen.begin(), chosen.end());

  // Measures keep first-appearance order; relations are keyed by id so the
  // statistics do not depend on the order cells arrive in.
  std::vector<MeasureKind> measure_order;
  std::map<MeasureKind, std::map<Relation, std::vector<double>>> values;
  for (const ScoreCell& cell : scores) {
    if (!values.contains(cell.measure)) measure_order.push_back(cell.measure);
    auto& bucket = values[cell.measure][cell.relation];
    if (cell.score) bucket.push_back(*cell.score);
  }

  EquitabilityReport report;
  for (MeasureKind measure : measure_order) {
    std::vector<double> means;
    std::vector<double> subset_means;
    for (const auto& [relation, vals] : values[measure]) {
      if (vals.empty()) continue;
      RelationSummary summary{measure, relation, mean(vals), stddev(vals), static_cast<int>(vals.size())};
      report.per_relation.push_back(summary);
      means.push_back(summary.mean);
      if (in_subset.contains(relation)) subset_means.push_back(summary.mean);
    }
    MeasureSpread spread;
    spread.measure = measure;
    spread.relations = static_cast<int>(means.size());
    if (!means.empty()) {
      spread.spread_sd = stddev(means);
      const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
      spread.spread_range = *hi - *lo;
    }
    if (!subset_means.empty()) spread.subset_sd = stddev(subset_means);
    report.per_measure.push_back(spread);
  }
  return report;
}

std::vector<PowerEstimate> run_power_equitability(const ExperimentConfig& config) {
  if (const auto errors = config.validate(); !errors.empty())
    throw Error(ErrorCode::InvalidArgument, "invalid experiment config: " + errors.front());

  const std::size_t levels = config.noise.size();
  const std::size_t relations = config.relations.size();
  std::vector<PowerEstimate> table(config.measures.size() * relations * levels);
  parallel_for(table.size(), config.threads, [&](std::size_t index) {
    const MeasureKind measure = config.measures[index / (relations * levels)];
    const Relation relation = config.relations[(index / levels) % relations];
    const NoiseTarget& level = config.noise[index % levels];

    PowerRequest request;
    request.measure = measure;
    request.relation = relation;
    request.noise = level;
    request.n = config.n;
    request.reps = config.power_reps;
    request.alpha = config.alpha;
    request.permutations = config.permutations;
    request.seed = derive_seed(config.base_seed, "power", to_string(relation), to_string(level.kind), level.ratio);
    request.params = config.params;
    request.params.hhg_cap = experiment_size(config, MeasureKind::Hhg);
    request.null_injection = config.null_injection;
    request.shared_lambda = config.shared_lambda;
    request.threads = 1;
    try {
      table[index] = estimate_power(request);
    } catch (const std::exception& e) {
      PowerEstimate& failed = table[index];
      failed.measure = measure;
      failed.relation = relation;
      failed.noise = level;
      failed.n = scored_size(measure, config.n, request.params);
      failed.reps = config.power_reps;
      failed.alpha = config.alpha;
      failed.power = std::numeric_limits<double>::quiet_NaN();
      failed.ci_low = failed.ci_high = std::numeric_limits<double>::quiet_NaN();
      failed.failures.push_back(e.what());
    }
  });
  return table;
}

double power_spread(std::span<const PowerEstimate> table, MeasureKind measure, const NoiseTarget& level) {
  std::map<Relation, double> by_relation;
  for (const PowerEstimate& cell : table) {
    if (cell.measure != measure || cell.noise.kind != level.kind || cell.noise.ratio != level.ratio) continue;
    if (cell.reps_completed == 0) continue;
    by_relation[cell.relation] = cell.power;
  }
  std::vector<double> powers;
  for (const auto& [relation, power] : by_relation) powers.push_back(power);
  return stddev(powers);
}

SelfEquitability self_equitability_check(MeasureKind measure, Relation relation, Index n, int reps,
                                         std::uint64_t seed, const NoiseTarget& noise, const MeasureParams& params) {
  if (!relation_spec(relation).strictly_increasing)
    throw Error(ErrorCode::InvalidArgument,
                std::string(to_string(relation)) + " is not strictly monotone; f(x) must determine y");
  if (reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be positive");
  std::vector<double> deltas;
  deltas.reserve(static_cast<std::size_t>(reps));
  for (int rep = 0; rep < reps; ++rep) {
    const std::uint64_t data_seed = derive_seed(seed, "self-equitability", to_string(relation), rep);
    const NoisyDataset data = generate_dataset(relation, n, noise, data_seed);
    const std::uint64_t measure_seed = derive_seed(data_seed, "measure", to_string(measure));
    const double on_x = score(measure, data.x, data.y, params, measure_seed);
    const double on_fx = score(measure, data.signal, data.y, params, measure_seed);
    deltas.push_back(std::abs(on_x - on_fx));
  }
  return {mean(deltas), stddev(deltas), reps};
}

}  // namespace equibench
