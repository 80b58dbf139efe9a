#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace evcorr {

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics and summaries to `err`. Returns 0 on success,
/// 2 on any error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evcorr
