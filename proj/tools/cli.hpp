// cli.hpp — command-line front end
//
// Subcommands: solve, fig, criteria, charfn, bench, oracle-check.
// Every flag can also be supplied by an environment variable named QDCAV_
// followed by the flag name in upper case with dashes as underscores
// (QDCAV_PRESET, QDCAV_GAMMA_D, ...); command-line values take precedence.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdcav::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,          // computation error or failed cross-check
    kConfigError = 2,      // bad flags, config file or parameter values
    kPartialFailure = 3    // some sweep points failed, the rest were written
};

// args excludes the program name. Results go to `out` unless --out is given;
// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdcav::cli
