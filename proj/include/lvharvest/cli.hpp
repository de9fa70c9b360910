#pragma once

#include <iosfwd>

namespace lvharvest {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,       ///< usage, parse, or configuration error
    kExitAssumption = 2,  ///< a model hypothesis does not hold
    kExitMismatch = 3,    ///< `verify` found a value outside tolerance
};

/// Entry point of the `lvharvest` tool. Subcommands: classify, optimize,
/// simulate, ensemble, sweep-noise, sweep-harvest, verify. Errors are
/// reported as one JSON object on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lvharvest
