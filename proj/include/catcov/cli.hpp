#ifndef CATCOV_CLI_HPP
#define CATCOV_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace catcov {

/// Runs one catcov invocation. Reports go to `out` (JSON) and one-line
/// summaries to `err`. Exit codes: 0 success / property true, 1 property
/// false, 2 input or validation error, 3 budget exhausted.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catcov

#endif
