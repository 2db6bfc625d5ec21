#ifndef DSIM_TOOLS_CLI_H_
#define DSIM_TOOLS_CLI_H_

#include <ostream>
#include <span>
#include <string>

namespace dsim::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point of the `dsim` tool. `args[0]` is the program name. Subcommands:
// aggregate, emd, select, select-multi, rebalance, split, report.
int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err);

}  // namespace dsim::tools

#endif  // DSIM_TOOLS_CLI_H_
