#include "equibench/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "equibench/cli/csv.hpp"

namespace equibench::cli {

namespace pt = boost::property_tree;

namespace {

std::string join_errors(const std::vector<std::string>& problems) {
  std::string text = "invalid configuration";
  for (const std::string& p : problems) text += "\n  " + p;
  return text;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename Int>
bool parse_int(const std::string& text, Int& out) {
  const std::string t = trim(text);
  const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
  return r.ec == std::errc{} && r.ptr == t.data() + t.size() && !t.empty();
}

bool parse_bool(const std::string& text, bool& out) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") {
    out = true;
    return true;
  }
  if (t == "false" || t == "0" || t == "no" || t == "off") {
    out = false;
    return true;
  }
  return false;
}

class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  void fail(const std::string& where, const std::string& what) { problems_.push_back(where + ": " + what); }

  template <typename Int>
  void integer(const std::string& where, const std::string& value, Int& out) {
    if (!parse_int(value, out)) fail(where, "expected an integer, got '" + value + "'");
  }
  void real(const std::string& where, const std::string& value, double& out) {
    if (auto v = parse_double(value)) {
      out = *v;
    } else {
      fail(where, "expected a number, got '" + value + "'");
    }
  }
  void boolean(const std::string& where, const std::string& value, bool& out) {
    if (!parse_bool(value, out)) fail(where, "expected true or false, got '" + value + "'");
  }
  std::vector<Relation> relations(const std::string& where, const std::string& value) {
    const std::string t = trim(value);
    if (t == "all") return all_relations();
    if (t == "default") return default_spread_subset();
    std::vector<Relation> out;
    for (const std::string& name : split_list(t)) {
      if (auto r = parse_relation(name)) {
        out.push_back(*r);
      } else {
        fail(where, "unknown relation '" + name + "'");
      }
    }
    return out;
  }

 private:
  std::vector<std::string>& problems_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_errors(problems)), problems_(std::move(problems)) {}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError({"line " + std::to_string(e.line()) + ": " + e.message()});
  }

  ExperimentConfig config;
  std::vector<std::string> problems;
  Reader read(problems);
  NoiseKind noise_kind = NoiseKind::Msnr;
  std::vector<double> levels{config.noise.front().ratio};
  double tolerance = config.noise.front().tolerance;
  int max_steps = config.noise.front().max_steps;

  static const std::set<std::string> sections{"experiment", "noise", "params", "spread"};
  for (const auto& [section, body] : tree) {
    if (!sections.contains(section)) {
      if (body.empty()) {
        problems.push_back(section + ": key outside any section");
      } else {
        problems.push_back("[" + section + "]: unknown section");
      }
      continue;
    }
    for (const auto& [key, node] : body) {
      const std::string value = node.data();
      const std::string where = section + "." + key;
      if (section == "experiment") {
        if (key == "relations") {
          config.relations = read.relations(where, value);
        } else if (key == "measures") {
          config.measures.clear();
          for (const std::string& name : split_list(value)) {
            if (auto m = parse_measure(name)) {
              config.measures.push_back(*m);
            } else {
              read.fail(where, "unknown measure '" + name + "'");
            }
          }
        } else if (key == "n") {
          read.integer(where, value, config.n);
        } else if (key == "hhg_n") {
          read.integer(where, value, config.hhg_n);
        } else if (key == "score_reps") {
          read.integer(where, value, config.score_reps);
        } else if (key == "power_reps") {
          read.integer(where, value, config.power_reps);
        } else if (key == "alpha") {
          read.real(where, value, config.alpha);
        } else if (key == "permutations") {
          read.integer(where, value, config.permutations);
        } else if (key == "seed") {
          read.integer(where, value, config.base_seed);
        } else if (key == "null_injection") {
          read.boolean(where, value, config.null_injection);
        } else if (key == "shared_lambda") {
          read.boolean(where, value, config.shared_lambda);
        } else {
          read.fail(where, "unknown key");
        }
      } else if (section == "noise") {
        if (key == "kind") {
          const std::string t = trim(value);
          if (t == "msnr") {
            noise_kind = NoiseKind::Msnr;
          } else if (t == "ssnr") {
            noise_kind = NoiseKind::Ssnr;
          } else {
            read.fail(where, "expected msnr or ssnr, got '" + t + "'");
          }
        } else if (key == "levels") {
          levels.clear();
          for (const std::string& item : split_list(value)) {
            double v = 0.0;
            read.real(where, item, v);
            levels.push_back(v);
          }
        } else if (key == "tolerance") {
          read.real(where, value, tolerance);
        } else if (key == "max_steps") {
          read.integer(where, value, max_steps);
        } else {
          read.fail(where, "unknown key");
        }
      } else if (section == "params") {
        try {
          config.params.set(key, trim(value));
        } catch (const std::exception& e) {
          read.fail(where, e.what());
        }
      } else if (section == "spread") {
        if (key == "subset") {
          config.spread_subset = read.relations(where, value);
        } else {
          read.fail(where, "unknown key");
        }
      }
    }
  }

  config.noise.clear();
  for (double level : levels) config.noise.push_back(NoiseTarget{noise_kind, level, tolerance, max_steps});

  for (std::string& problem : config.validate()) problems.push_back(std::move(problem));
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  return parse_config(in);
}

namespace {

std::string relation_list(const std::vector<Relation>& relations) {
  std::string out;
  for (Relation r : relations) {
    if (!out.empty()) out += ',';
    out += to_string(r);
  }
  return out;
}

}  // namespace

std::string default_config_text() {
  const ExperimentConfig d;
  const MeasureParams& p = d.params;
  std::ostringstream os;
  os << "; equibench experiment configuration\n"
     << "; Lines starting with ';' are comments. Lists are comma separated.\n"
     << "\n[experiment]\n"
     << "; relation ids (see `equibench relations`) or 'all'\n"
     << "relations = all\n"
     << "; pcor,scor,kcor,dcor,hsic,mi,mic,rdc,ace,hhg\n"
     << "measures = pcor,scor,kcor,dcor,hsic,mi,mic,rdc,ace,hhg\n"
     << "; sample size per dataset\n"
     << "n = " << d.n << "\n"
     << "; HHG is scored on the first hhg_n points when n is larger\n"
     << "hhg_n = " << d.hhg_n << "\n"
     << "; replicates for the score experiment (>= 2)\n"
     << "score_reps = " << d.score_reps << "\n"
     << "; replicates per power estimate (>= 30)\n"
     << "power_reps = " << d.power_reps << "\n"
     << "alpha = " << format_double(d.alpha) << "\n"
     << "; permutations per null distribution (>= 20)\n"
     << "permutations = " << d.permutations << "\n"
     << "seed = " << d.base_seed << "\n"
     << "; replace y by an independent shuffle (calibration run)\n"
     << "null_injection = false\n"
     << "; one critical value from the first replicate instead of one per dataset\n"
     << "shared_lambda = false\n"
     << "\n[noise]\n"
     << "; msnr = var(y)/var(noise), ssnr = sum(y^2)/sum(noise^2)\n"
     << "kind = msnr\n"
     << "; the score experiment uses the first level, the power experiment all of them\n"
     << "levels = " << format_double(d.noise.front().ratio) << "\n"
     << "; ssnr heuristic search settings\n"
     << "tolerance = " << format_double(d.noise.front().tolerance) << "\n"
     << "max_steps = " << d.noise.front().max_steps << "\n"
     << "\n[params]\n"
     << "mi.k = " << p.mi_k << "\n"
     << "mi.normalized = false\n"
     << "mic.alpha = " << format_double(p.mic_alpha) << "\n"
     << "mic.clumps = " << p.mic_clumps << "\n"
     << "rdc.k = " << p.rdc_k << "\n"
     << "rdc.s = " << format_double(p.rdc_s) << "\n"
     << "ace.max_iter = " << p.ace_max_iter << "\n"
     << "ace.tol = " << format_double(p.ace_tol) << "\n"
     << "hhg.cap = " << p.hhg_cap << "\n"
     << "\n[spread]\n"
     << "; relations for the subset spread column: a list, 'all' or 'default'\n"
     << "; (default drops sigmoid, lopsided_l_shaped, l_shaped and spike)\n"
     << "subset = default\n";
  return os.str();
}

std::string config_snapshot(const ExperimentConfig& config) {
  std::ostringstream os;
  os << "[experiment]\n"
     << "relations = " << relation_list(config.relations) << "\n"
     << "measures = ";
  for (std::size_t i = 0; i < config.measures.size(); ++i) os << (i ? "," : "") << to_string(config.measures[i]);
  os << "\nn = " << config.n << "\n"
     << "hhg_n = " << config.hhg_n << "\n"
     << "score_reps = " << config.score_reps << "\n"
     << "power_reps = " << config.power_reps << "\n"
     << "alpha = " << format_double(config.alpha) << "\n"
     << "permutations = " << config.permutations << "\n"
     << "seed = " << config.base_seed << "\n"
     << "null_injection = " << (config.null_injection ? "true" : "false") << "\n"
     << "shared_lambda = " << (config.shared_lambda ? "true" : "false") << "\n"
     << "\n[noise]\n"
     << "kind = " << to_string(config.noise.front().kind) << "\n"
     << "levels = ";
  for (std::size_t i = 0; i < config.noise.size(); ++i) os << (i ? "," : "") << format_double(config.noise[i].ratio);
  const MeasureParams& p = config.params;
  os << "\ntolerance = " << format_double(config.noise.front().tolerance) << "\n"
     << "max_steps = " << config.noise.front().max_steps << "\n"
     << "\n[params]\n"
     << "mi.k = " << p.mi_k << "\n"
     << "mi.normalized = " << (p.mi_normalized ? "true" : "false") << "\n"
     << "mic.alpha = " << format_double(p.mic_alpha) << "\n"
     << "mic.clumps = " << p.mic_clumps << "\n"
     << "rdc.k = " << p.rdc_k << "\n"
     << "rdc.s = " << format_double(p.rdc_s) << "\n"
     << "ace.max_iter = " << p.ace_max_iter << "\n"
     << "ace.tol = " << format_double(p.ace_tol) << "\n"
     << "hhg.cap = " << p.hhg_cap << "\n"
     << "\n[spread]\n"
     << "subset = " << relation_list(config.spread_subset) << "\n";
  return os.str();
}

}  // namespace equibench::cli
