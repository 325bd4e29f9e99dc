#pragma once

#include <exception>
#include <ostream>
#include <string>

#include "caputo/config.hpp"

namespace caputo {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitNumericalFailure = 3,
  kExitOracleFailure = 4,
};

/// Shortest decimal that round-trips to the same double, with ".0"
/// appended to integral values ("1.0", "0.5", "1e-05").
std::string format_number(double value);

/// Executes `config` and writes its CSV (header row first) to `out`.
/// Throws on any failure; non-finite results raise EvaluationError.
void run(const RunConfig& config, std::ostream& out);

int exit_code_for(const std::exception& error);

/// Parse, run and report: CSV goes to the configured output file or to
/// `out` when none is set; a one-line diagnostic goes to `err` on failure.
int run_config_text(const std::string& text, std::ostream& out, std::ostream& err);

}  // namespace caputo
