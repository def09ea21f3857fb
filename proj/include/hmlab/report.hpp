#pragma once

#include "hmlab/params.hpp"

#include <json.hpp>  // vendored nlohmann/json single header

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hmlab {

enum class Command { Curvature, Regularity, StaticCheck, Complex, Energy, Compare, VerifyAll };
enum class OutputFormat { Table, Csv, Json };

std::string command_name(Command c);
Command command_from_name(const std::string& name);
std::string format_name(OutputFormat f);
OutputFormat format_from_name(const std::string& name);

struct SweepSpec {
  std::string param;  // one of a, r0, ell, n
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

/// Parses "a=-5..5:41".
SweepSpec parse_sweep(const std::string& text);

struct RunConfig {
  SolitonParams params = SolitonParams::make(3, 1.0, 0.0, 1.0);
  Command command = Command::VerifyAll;
  std::optional<SweepSpec> sweep;
  OutputFormat format = OutputFormat::Table;
  std::string out_path;  // empty -> stdout
  Tolerances tol;
  double r = 0.0;  // evaluation radius for pointwise commands; 0 -> 2 r_plus
};

/// One verified identity: a computed value, its reference, the absolute
/// deviation and the tolerance it was held to.
struct Check {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  bool operator==(const Check&) const = default;
};

Check make_check(std::string name, double value, double reference, double tolerance);

struct Report {
  std::string command;
  SolitonParams params;
  Tolerances tol;
  std::optional<SweepSpec> sweep;
  std::vector<std::string> result_names;
  std::vector<std::vector<double>> rows;  // one row per sweep point (or one)
  std::vector<Check> checks;

  bool all_pass() const;
  bool operator==(const Report& other) const;
};

nlohmann::ordered_json to_json(const Report& report);
Report report_from_json(const nlohmann::ordered_json& j);

/// Serialized report: JSON is exact round-trip; table and CSV print floating
/// point with 15 significant digits.
std::string emit(const Report& report, OutputFormat format);

/// Executes the configured pipeline. Throws std::invalid_argument for
/// domain/usage violations and std::runtime_error for numerical failures.
Report run_report(const RunConfig& config);

}  // namespace hmlab
