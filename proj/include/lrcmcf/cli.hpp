#pragma once

#include "lrcmcf/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lrcmcf {

// Runs one command line (args[0] is the program name) and returns the exit
// code; never throws.
//
// Commands: cluster, sweep-k, synth, eval, baseline. See README.md.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Config serialization used for the resolved-config snapshot and --config.
std::string lambda_to_string(const LambdaMode& mode);
LambdaMode parse_lambda(const std::string& text);

}  // namespace lrcmcf
