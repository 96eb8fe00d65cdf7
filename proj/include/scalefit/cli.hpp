#pragma once

#include <string>
#include <vector>

namespace scalefit {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_input_error = 1,
    exit_fit_error = 2,
    exit_io_error = 3,
};

/// Entry point behind the `scalefit` binary; also callable from tests.
/// args excludes the program name, e.g. {"analyze", "runs.csv", "--out", "r.json"}.
int run_cli(const std::vector<std::string>& args);

int run_cli(int argc, const char* const* argv);

}  // namespace scalefit
