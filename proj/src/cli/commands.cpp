#include "equibench/cli/commands.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "equibench/cli/config.hpp"
#include "equibench/cli/csv.hpp"
#include "equibench/parallel.hpp"
#include "equibench/seed.hpp"
#include "equibench/suite.hpp"

namespace equibench::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string run_id(std::string_view snapshot) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << splitmix64(fnv1a(snapshot));
  return os.str();
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string optional_number(double value) { return std::isfinite(value) ? format_double(value) : std::string(); }

// Writes `content` to `path`; false when the file cannot be written.
bool write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) return false;
  file << content;
  file.close();
  return static_cast<bool>(file);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// ---------------------------------------------------------------- relations

int cmd_relations(bool as_json, std::ostream& out) {
  if (as_json) {
    json listing = json::array();
    for (const RelationSpec& spec : list_relations()) {
      listing.push_back({{"id", std::string(spec.name)},
                         {"name", std::string(spec.display_name)},
                         {"formula", std::string(spec.formula)},
                         {"strictly_increasing", spec.strictly_increasing}});
    }
    out << listing.dump(2) << '\n';
    return kExitOk;
  }
  for (const RelationSpec& spec : list_relations()) {
    out << std::left << std::setw(24) << spec.name << std::setw(28) << spec.display_name << spec.formula << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------- gen

struct GenOptions {
  std::string relation;
  Index n = 0;
  std::optional<double> msnr;
  std::optional<double> ssnr;
  double tolerance = 0.03;
  int max_steps = 100;
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  const auto relation = parse_relation(opt.relation);
  if (!relation) {
    err << "error: unknown relation '" << opt.relation << "' (see `equibench relations`)\n";
    return kExitBadId;
  }
  if (opt.msnr.has_value() == opt.ssnr.has_value()) {
    err << "error: exactly one of --msnr or --ssnr is required\n";
    return kExitUsage;
  }
  const NoiseTarget target = opt.msnr ? NoiseTarget::msnr(*opt.msnr)
                                      : NoiseTarget::ssnr(*opt.ssnr, opt.tolerance, opt.max_steps);
  NoisyDataset data;
  try {
    data = generate_dataset(*relation, opt.n, target, opt.seed);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  std::ostringstream csv;
  write_csv_row(csv, {"x", "y", "relation", "noise_kind", "target_ratio", "achieved_ratio", "seed"});
  const std::string name(to_string(*relation));
  const std::string kind(to_string(target.kind));
  const std::string target_text = format_double(target.ratio);
  const std::string achieved_text = format_double(data.achieved_ratio);
  const std::string seed_text = std::to_string(opt.seed);
  for (Index i = 0; i < data.x.size(); ++i) {
    write_csv_row(csv, {format_double(data.x[i]), format_double(data.y[i]), name, kind, target_text, achieved_text,
                        seed_text});
  }
  if (opt.out_path.empty()) {
    out << csv.str();
  } else if (!write_file(opt.out_path, csv.str())) {
    err << "error: cannot write '" << opt.out_path << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

// -------------------------------------------------------------------- score

struct ScoreOptions {
  std::string input;
  std::string measures = "pcor";
  std::vector<std::string> params;
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_score(const ScoreOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<MeasureKind> measures;
  for (const std::string& name : split_commas(opt.measures)) {
    const auto kind = parse_measure(name);
    if (!kind) {
      err << "error: unknown measure '" << name << "'\n";
      return kExitBadId;
    }
    measures.push_back(*kind);
  }
  if (measures.empty()) {
    err << "error: --measures is empty\n";
    return kExitUsage;
  }
  MeasureParams params;
  for (const std::string& assignment : opt.params) {
    const auto eq = assignment.find('=');
    try {
      if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "expected key=value");
      params.set(assignment.substr(0, eq), assignment.substr(eq + 1));
    } catch (const Error& e) {
      err << "error: --param " << assignment << ": " << e.what() << '\n';
      return kExitParse;
    }
  }

  std::ifstream file(opt.input, std::ios::binary);
  if (!file) {
    err << "error: cannot open '" << opt.input << "'\n";
    return kExitIo;
  }
  Vector x;
  Vector y;
  try {
    const CsvTable table = read_csv(file);
    const auto xc = table.column("x");
    const auto yc = table.column("y");
    if (!xc || !yc) throw CsvError(1, std::string("missing column '") + (xc ? "y" : "x") + "'");
    x.resize(static_cast<Index>(table.rows.size()));
    y.resize(x.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto xv = parse_double(table.rows[r][*xc]);
      const auto yv = parse_double(table.rows[r][*yc]);
      if (!xv || !yv) throw CsvError(table.row_lines[r], "non-numeric x or y value");
      x[static_cast<Index>(r)] = *xv;
      y[static_cast<Index>(r)] = *yv;
    }
  } catch (const CsvError& e) {
    err << "error: " << opt.input << ": " << e.what() << '\n';
    return kExitParse;
  }

  bool failed = false;
  std::ostringstream csv;
  write_csv_row(csv, {"measure", "value", "n", "params"});
  for (MeasureKind kind : measures) {
    const std::string name(to_string(kind));
    try {
      const MeasureScore s = score_measure(kind, x, y, params, derive_seed(opt.seed, name));
      write_csv_row(csv, {name, format_double(s.value), std::to_string(s.n), s.params});
    } catch (const std::exception& e) {
      failed = true;
      err << "error: " << name << ": " << e.what() << '\n';
      write_csv_row(csv, {name, "", std::to_string(x.size()), params.describe(kind)});
    }
  }
  if (opt.out_path.empty()) {
    out << csv.str();
  } else if (!write_file(opt.out_path, csv.str())) {
    err << "error: cannot write '" << opt.out_path << "'\n";
    return kExitIo;
  }
  return failed ? kExitPartial : kExitOk;
}

// -------------------------------------------------------------- experiments

struct ExperimentOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

enum class Experiment { Equitability, Power };

std::string scores_csv(const EquitabilityTable& table, const std::string& id) {
  std::ostringstream csv;
  write_csv_row(csv, {"measure", "relation", "rep", "score", "achieved_ratio", "run_id"});
  for (const ScoreCell& cell : table.scores) {
    const bool has_data = cell.failure != "dataset unavailable";
    write_csv_row(csv, {std::string(to_string(cell.measure)), std::string(to_string(cell.relation)),
                        std::to_string(cell.rep), cell.score ? format_double(*cell.score) : std::string(),
                        has_data ? format_double(cell.achieved_ratio) : std::string(), id});
  }
  return csv.str();
}

std::string spread_csv(const EquitabilityReport& report, const std::string& id) {
  std::ostringstream csv;
  write_csv_row(csv, {"measure", "spread_sd", "spread_range", "subset_sd", "run_id"});
  for (const MeasureSpread& s : report.per_measure) {
    write_csv_row(csv, {std::string(to_string(s.measure)), format_double(s.spread_sd), format_double(s.spread_range),
                        s.subset_sd ? format_double(*s.subset_sd) : std::string(), id});
  }
  return csv.str();
}

std::string power_csv(const std::vector<PowerEstimate>& table, const std::string& id) {
  std::ostringstream csv;
  write_csv_row(csv, {"measure", "relation", "noise_level", "power", "ci_low", "ci_high", "reps_completed", "run_id"});
  for (const PowerEstimate& p : table) {
    write_csv_row(csv, {std::string(to_string(p.measure)), std::string(to_string(p.relation)),
                        format_double(p.noise.ratio), optional_number(p.power), optional_number(p.ci_low),
                        optional_number(p.ci_high), std::to_string(p.reps_completed), id});
  }
  return csv.str();
}

// Loads an existing manifest of the same run so the two experiment commands
// can share one file; anything else is replaced.
json base_manifest(const fs::path& path, const std::string& id, const ExperimentConfig& config,
                   const std::string& snapshot) {
  std::ifstream in(path);
  if (in) {
    try {
      json existing = json::parse(in);
      if (existing.value("run_id", std::string()) == id) return existing;
    } catch (const json::exception&) {
    }
  }
  return json{{"artifact", "equibench"},
              {"version", std::string(kVersion)},
              {"run_id", id},
              {"base_seed", config.base_seed},
              {"config", snapshot},
              {"commands", json::object()}};
}

int cmd_experiment(Experiment which, const ExperimentOptions& opt, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = load_config(opt.config_path);
  } catch (const ConfigError& e) {
    err << "error: " << opt.config_path << ": invalid configuration\n";
    for (const std::string& problem : e.problems()) err << "  " << problem << '\n';
    return kExitParse;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  if (opt.seed) config.base_seed = *opt.seed;
  try {
    config.threads = resolve_threads(opt.threads);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const fs::path dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    err << "error: cannot create output directory '" << opt.out_dir << "'\n";
    return kExitIo;
  }

  const std::string snapshot = config_snapshot(config);
  const std::string id = run_id(snapshot);
  const std::string started = utc_now();
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<std::string> failures;
  std::string command;

  try {
    if (which == Experiment::Equitability) {
      command = "equitability";
      const EquitabilityTable table = run_equitability(config);
      const EquitabilityReport report = equitability_spread(table.scores, config.spread_subset);
      files.emplace_back("scores.csv", scores_csv(table, id));
      files.emplace_back("spread.csv", spread_csv(report, id));
      failures = table.failures;
    } else {
      command = "power";
      const std::vector<PowerEstimate> table = run_power_equitability(config);
      files.emplace_back("power.csv", power_csv(table, id));
      for (const PowerEstimate& p : table) {
        for (const std::string& f : p.failures) {
          failures.push_back(std::string(to_string(p.measure)) + " " + std::string(to_string(p.relation)) + " " +
                             format_double(p.noise.ratio) + ": " + f);
        }
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  json manifest = base_manifest(dir / "manifest.json", id, config, snapshot);
  json outputs = json::array();
  for (const auto& [name, content] : files) outputs.push_back(name);
  manifest["commands"][command] = {{"started", started},
                                   {"finished", utc_now()},
                                   {"threads", config.threads},
                                   {"outputs", outputs},
                                   {"failures", failures}};
  files.emplace_back("manifest.json", manifest.dump(2) + "\n");

  for (const auto& [name, content] : files) {
    if (!write_file(dir / name, content)) {
      err << "error: cannot write '" << (dir / name).string() << "'\n";
      return kExitIo;
    }
  }
  out << command << ": run " << id << ", wrote";
  for (const auto& [name, content] : files) out << ' ' << name;
  out << " to " << dir.string() << '\n';
  if (!failures.empty()) {
    err << "warning: " << failures.size() << " cell(s) failed; see manifest.json\n";
    return kExitPartial;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmark dependence measures for equitability under controlled noise", "equibench"};
  app.set_version_flag("--version", std::string(kVersion));
  bool print_config_flag = false;
  app.add_flag("--print-default-config", print_config_flag, "Print a commented configuration template");

  bool as_json = false;
  auto* relations = app.add_subcommand("relations", "List the 21 relation types");
  relations->add_flag("--json", as_json, "Machine-readable listing");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate one noisy dataset as CSV");
  gen_cmd->add_option("--relation", gen.relation, "Relation id")->required();
  gen_cmd->add_option("--n", gen.n, "Sample size")->required()->check(CLI::Range(Index{2}, Index{100000000}));
  auto* msnr_opt = gen_cmd->add_option("--msnr", gen.msnr, "Target var(y)/var(noise)");
  auto* ssnr_opt = gen_cmd->add_option("--ssnr", gen.ssnr, "Target sum(y^2)/sum(noise^2)");
  msnr_opt->excludes(ssnr_opt);
  gen_cmd->add_option("--tolerance", gen.tolerance, "SSNR heuristic tolerance");
  gen_cmd->add_option("--max-steps", gen.max_steps, "SSNR heuristic draws");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out_path, "Output path (default: standard output)");

  ScoreOptions score_opt;
  auto* score_cmd = app.add_subcommand("score", "Score a CSV dataset with x,y columns");
  score_cmd->add_option("--input", score_opt.input, "Input CSV")->required();
  score_cmd->add_option("--measures", score_opt.measures, "Comma-separated measure ids");
  score_cmd->add_option("--param", score_opt.params, "Parameter override key=value (repeatable)");
  score_cmd->add_option("--seed", score_opt.seed, "Seed for randomized measures");
  score_cmd->add_option("--out", score_opt.out_path, "Output path (default: standard output)");

  ExperimentOptions equi;
  auto* equi_cmd = app.add_subcommand("equitability", "Run the score-equitability experiment");
  ExperimentOptions power;
  auto* power_cmd = app.add_subcommand("power", "Run the power-equitability experiment");
  for (auto [cmd, opt] : {std::pair{equi_cmd, &equi}, std::pair{power_cmd, &power}}) {
    cmd->add_option("--config", opt->config_path, "Experiment configuration file")->required();
    cmd->add_option("--out", opt->out_dir, "Output directory")->required();
    cmd->add_option("--seed", opt->seed, "Override the configured base seed");
    cmd->add_option("--threads", opt->threads, "Worker threads (default: EQUIBENCH_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
  }

  auto* print_cmd = app.add_subcommand("print-default-config", "Print a commented configuration template");
  app.require_subcommand(0, 1);

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("equibench");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (print_config_flag || print_cmd->parsed()) {
    out << default_config_text();
    return kExitOk;
  }
  if (relations->parsed()) return cmd_relations(as_json, out);
  if (gen_cmd->parsed()) return cmd_gen(gen, out, err);
  if (score_cmd->parsed()) return cmd_score(score_opt, out, err);
  if (equi_cmd->parsed()) return cmd_experiment(Experiment::Equitability, equi, out, err);
  if (power_cmd->parsed()) return cmd_experiment(Experiment::Power, power, out, err);
  out << app.help();
  return kExitUsage;
}

}  // namespace equibench::cli
