#pragma once

// Batch front end: configuration documents, curve CSV files, reports and the
// verification suites.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heis/error.hpp"
#include "heis/intersect.hpp"
#include "heis/polynomial.hpp"

namespace heis::cli {

enum class Command { Intersect, Characteristics, Trace, Verify };

std::string_view to_string(Command c);

struct RunConfig {
  Command command = Command::Intersect;
  std::vector<PolySurface> surfaces;
  Point base_point;
  /// Half width of the (η, τ) window.
  double window = 0.5;
  double step = 1e-3;
  /// Samples per axis for margin and field-bound grids.
  int grid = 41;
  /// Residual tolerance for reported checks.
  double tolerance = 1e-8;
  /// Starting values of the characteristics command.
  std::vector<double> tau0{-0.3, -0.1, 0.1, 0.3};
  std::string output;
  std::string report;
  std::string suite = "all";
  std::uint64_t seed = 1;
};

/// Parses and validates a JSON configuration. Throws Error(Config) with the
/// offending field path in the message. `invoked` supplies the command when
/// the document has none and must agree with it otherwise.
RunConfig parse_config(std::string_view text, std::optional<Command> invoked = {});
RunConfig load_config(const std::string& path, std::optional<Command> invoked = {});

/// Polynomial from [[i, j, k, c], ...] quadruples.
Polynomial polynomial_from_quadruples(const std::vector<std::array<double, 4>>& terms);

struct Check {
  std::string suite;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  /// "<=" or ">=": how value is compared with tolerance.
  std::string relation = "<=";
  bool pass = false;
};

Check make_check(std::string suite, std::string name, double value, double tolerance,
                 std::string relation = "<=");

struct Report {
  std::string command;
  std::vector<Check> checks;
  /// Informational quantities without a pass/fail meaning.
  std::vector<std::pair<std::string, double>> values;

  bool all_pass() const;
  std::string to_json() const;
};

// ---------------------------------------------------------------------------
// Curve CSV

struct CurveRow {
  double xi = 0.0;
  double eta = 0.0;
  double tau = 0.0;
  Point x;
};

std::vector<CurveRow> curve_rows(const Curve& curve);
/// Header xi,eta,tau,x11,x12,t and 17 significant digits per value.
void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows);
/// Throws Error(Config) on a malformed file.
std::vector<CurveRow> read_curve_csv(std::istream& in);

/// Residual and distinctness checks of re-read rows against the surfaces.
Report validate_rows(const std::vector<CurveRow>& rows, const SurfaceHandle& f1,
                     const SurfaceHandle& f2, double tolerance);

// ---------------------------------------------------------------------------
// Verification suites on the built-in fixtures

const std::vector<std::string>& suite_names();
/// Runs one suite, or all of them for "all". Throws Error(Config) for an
/// unknown name.
Report verify(const std::string& suite, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Commands

struct Outcome {
  int exit_code = 0;
  std::string message;
  std::optional<Report> report;
  /// CSV text when the config names no output file.
  std::string csv;
};

/// Runs the command. Mathematical failures give exit code 1 and a message
/// naming the violated assumption, configuration and I/O problems give 2.
Outcome run(const RunConfig& config);

/// Exit code for an error kind.
int exit_code_for(ErrorKind kind);
/// Message naming the condition and the hypothesis it reflects.
std::string explain(const Error& e);

}  // namespace heis::cli
