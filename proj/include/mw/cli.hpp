#pragma once

// The mwcg command-line harness, callable in-process.
//
// Exit codes: 0 success, 1 usage error, 2 input error, 3 verification
// failure. Non-convergence of a solve is a reported outcome, not an error.

#include <iosfwd>
#include <string>
#include <vector>

namespace mw {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_input = 2, exit_verify = 3 };

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mw
