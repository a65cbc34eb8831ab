#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "epirk/integrators.hpp"

namespace epirk {

// Column order is the file format contract; parsers key on position.
inline constexpr const char* kCsvHeader =
    "method,mode,m,problem,h_or_rtol,error,steps_accepted,steps_rejected,"
    "krylov_rms,cpu_seconds";

struct CsvRow {
  std::string method;
  std::string mode;
  int m = 0;  // fixed Krylov dimension when the mode pins one, 0 otherwise
  std::string problem;
  double h_or_rtol = 0;
  double error = 0;
  long long steps_accepted = 0;
  long long steps_rejected = 0;
  double krylov_rms = 0;
  double cpu_seconds = 0;
};

// Numeric fields are written with 17 significant digits so that parsing the
// line back reproduces them bit for bit.
std::string csv_format(const CsvRow& row);
CsvRow csv_parse(const std::string& line);

// Least-squares slope of log2(error) against log2(h). Pairs with
// non-finite or non-positive error are dropped; fewer than three surviving
// points is an error.
double estimate_order(const std::vector<double>& hs,
                      const std::vector<double>& errors);

struct MethodCell {
  std::string method;
  std::string mode;  // empty means the method's default
};

struct ExperimentConfig {
  std::string command;  // "convergence" or "workprecision"
  std::string problem = "lorenz96";
  bool tspan_set = false;
  double t0 = 0;
  double tf = 0;
  double h0 = 0.01;
  int halvings = 5;
  std::vector<double> rtols;
  bool atol_set = false;
  double atol = 0;  // when unset, atol tracks each row's rtol
  std::string out;
  bool serial = false;
  unsigned long seed = 0;
  std::vector<MethodCell> cells;
};

// Flat key=value lines; a "[method]" line opens a cell whose keys are
// name and mode. '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

// One-line canonical rendering embedded as the CSV comment header.
std::string config_echo(const ExperimentConfig& cfg);

// Exit codes: 0 success, 1 usage, 2 numerical failure. The cmd_ functions
// return the code; the CLI translates exceptions from bad names the same way.
int cmd_verify(const std::string& method, std::ostream& out);
int cmd_convergence(const ExperimentConfig& cfg, std::ostream& csv,
                    std::ostream& log);
int cmd_workprecision(const ExperimentConfig& cfg, std::ostream& csv,
                      std::ostream& log);
void list_methods(std::ostream& out);
void list_problems(std::ostream& out);

}  // namespace epirk
