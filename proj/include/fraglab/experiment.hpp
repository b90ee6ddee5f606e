#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fraglab/serialize.hpp"

namespace fraglab::cli {

inline constexpr int kSchemaVersion = 1;

/// A validated experiment definition.
///
/// `params` keeps the original JSON so reports can echo it, but every kind is
/// parsed into its typed form by parse_experiment before anything runs.
struct Experiment {
  int schema_version = kSchemaVersion;
  std::string kind;
  json params;
  std::string output_path;
  std::uint64_t seed = 0;

  json to_json() const;
};

/// Throws ConfigError naming the first offending field.
Experiment parse_experiment(const json& j);
Experiment load_experiment(const std::string& path);

/// Applies a `dotted.path=value` override; the value is read as JSON when it
/// parses, as a string otherwise.
void apply_override(json& config, const std::string& assignment);

/// {experiment, result, library_version, wall_time_s}; writes to output_path when set.
json run_experiment(const Experiment& e);

/// Checks a report's layout and that its echoed experiment re-validates.
void validate_report(const json& report);

/// One experiment per value of params[axis].
std::vector<json> sweep(const Experiment& templ, const std::string& axis, const std::vector<json>& values);

/// Axis column followed by every numeric result field, 17 significant digits.
void write_sweep_csv(std::ostream& out, const std::string& axis, const std::vector<json>& reports);

std::string library_version();

}  // namespace fraglab::cli
