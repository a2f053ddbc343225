#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace icesurf::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInfeasible = 1,
    kBadInput = 2,
    kIoFailure = 3,
};

/// Runs one subcommand (synth, train, infer, eval, export-plot). `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace icesurf::cli
