#ifndef SPINSIM_CLI_HPP
#define SPINSIM_CLI_HPP

#include <string>
#include <vector>

namespace spinsim {

/// Exit codes: 0 success, 2 usage, 3 config/validation, 4 numeric/solver.
/// Errors print a JSON envelope to stderr. Subcommands: tf, modes, sweep,
/// scaling, oracle homogeneous|box, mode-profile. SPINSIM_THREADS limits the
/// worker count (0 or unset = all).
int run_cli(const std::vector<std::string>& args);

} // namespace spinsim

#endif
