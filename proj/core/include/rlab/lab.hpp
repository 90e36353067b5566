#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/rational.hpp"

namespace rlab {

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);
OutputFormat parse_output_format(const std::string& s);

struct ResourceCaps {
  std::uint64_t max_x = 10'000'000;
  std::uint64_t max_d = 1'000'000;
  friend bool operator==(const ResourceCaps&, const ResourceCaps&) = default;
};

/// A named experiment with knob overrides. Knobs absent from `knobs` take
/// the experiment's defaults (see experiment_catalog).
struct ExperimentConfig {
  std::string name;
  nlohmann::json functions = nlohmann::json::object();
  nlohmann::json knobs = nlohmann::json::object();
  std::uint64_t seed = 1;
  std::string output_dir;  // empty: nothing written
  OutputFormat format = OutputFormat::csv;
  ResourceCaps caps;

  [[nodiscard]] nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ExperimentInfo {
  std::string name;
  std::string summary;
  nlohmann::json defaults;   // knob -> default value
  nlohmann::json functions;  // role -> default function spec
};

const std::vector<ExperimentInfo>& experiment_catalog();

/// Throws UnknownNameError.
const ExperimentInfo& find_experiment(const std::string& name);

struct CheckOutcome {
  std::string check;
  std::string outcome;  // "pass", "fail" or an at-cut verdict
  std::string detail;
  [[nodiscard]] bool failed() const { return outcome == "fail"; }
  friend bool operator==(const CheckOutcome&, const CheckOutcome&) = default;
};

struct RunRecord {
  std::string experiment;
  std::string config_hash;
  std::vector<CheckOutcome> checks;
  double seconds = 0.0;
  std::vector<std::string> artifacts;

  [[nodiscard]] bool all_pass() const;
  /// Everything but the timing.
  [[nodiscard]] bool same_outcomes(const RunRecord& other) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// FNV-1a 64 over the canonical JSON of the config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Errors: UnknownNameError for the name, SchemaError for malformed knobs
/// or functions (including empty grids), ResourceError past the caps,
/// IoError for unwritable output.
RunRecord run_experiment(const ExperimentConfig& cfg);

enum class ColumnType { integer, rational, real, text };

struct Column {
  std::string name;
  ColumnType type = ColumnType::text;
};

using Cell = std::variant<std::int64_t, Rational, double, std::string>;

/// A typed table. Rationals print as "p/q", reals with 17 significant
/// digits.
struct ResultTable {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws SchemaError when the row does not match the column types.
  void add_row(std::vector<Cell> row);
};

std::string format_real(double x);
std::string format_cell(const Cell& c);

void emit(const ResultTable& t, OutputFormat format, std::ostream& out);

/// Writes <dir>/<t.name>.csv or .json and returns the path.
std::string emit(const ResultTable& t, OutputFormat format, const std::string& dir);

}  // namespace rlab
