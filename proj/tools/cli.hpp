#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperclust::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_input_error = 2,
    exit_parameter_error = 3,
    exit_internal_error = 4,
};

// Runs one subcommand (`ingest`, `cluster`, `sweep`, `stats`, `export-distances`).
// args excludes the program name. Progress and errors go to `log`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log);

}  // namespace hyperclust::cli
