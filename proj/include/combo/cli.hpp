#ifndef COMBO_CLI_HPP
#define COMBO_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace combo::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3 };

/// Runs the `combo` command line. args excludes the program name. Data
/// goes to files; diagnostics go to `err`; help text goes to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace combo::cli

#endif  // COMBO_CLI_HPP
