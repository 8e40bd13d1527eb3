#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "equibench/suite.hpp"

namespace equibench::cli {

/// Every problem found in a configuration file, parse and validation alike.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Reads an INI experiment file with sections [experiment], [noise],
/// [params] and [spread]. Unknown keys, malformed values and failed
/// validation are all collected before throwing ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Commented template holding every key at its default.
std::string default_config_text();

/// Canonical rendering of the fields that influence results (thread count
/// excluded). Two configs with equal snapshots produce identical tables.
std::string config_snapshot(const ExperimentConfig& config);

}  // namespace equibench::cli
