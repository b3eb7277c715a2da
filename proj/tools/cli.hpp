#ifndef IRID_TOOLS_CLI_HPP
#define IRID_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace irid::cli {

/// Exit codes of the irid tool.
enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kRuntime = 3,
  /// compare: the two backends chose different policies.
  kDisagree = 4,
};

/// Runs the tool with `args` (without the program name), writing to the
/// given streams instead of the process ones.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irid::cli

#endif  // IRID_TOOLS_CLI_HPP
