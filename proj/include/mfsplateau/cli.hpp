#pragma once

#include <iosfwd>
#include <vector>

#include "mfsplateau/io.hpp"

namespace mfsplateau {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

/// Subcommand bodies. Each validates the config, writes its outputs under
/// config.output.dir and prints a one-line summary to `log`. Errors are
/// thrown as ConfigError / NumericalError.
void cmd_solve(const RunConfig& config, std::ostream& log);
void cmd_sweep(const RunConfig& config, std::ostream& log);
void cmd_random_search(const RunConfig& config, std::ostream& log);
void cmd_grid(const RunConfig& config, std::ostream& log);

/// Full command line front end. On failure a JSON error object
/// {"error": {"kind", "message", "exit_code"}} is written to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mfsplateau
