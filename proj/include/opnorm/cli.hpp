#ifndef OPNORM_CLI_HPP_
#define OPNORM_CLI_HPP_

#include <iosfwd>

namespace opnorm {

// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // verify mismatch or NaN in a report
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNotConverged = 3;

// Entry point of the `opnorm` tool. Reports go to `out` as JSON, diagnostics
// to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace opnorm

#endif  // OPNORM_CLI_HPP_
