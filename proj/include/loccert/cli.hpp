#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace loccert {

/// Command-line entry point, separated from main() so tests can drive it
/// in-process. Exit codes: 0 = ran (no violation found), 10 = the
/// finite-round-LOCC necessary condition is violated, 1 = any error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loccert
