#ifndef LGM_CLI_HPP_
#define LGM_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace lgm {

// Runs one CLI invocation (without the program name).  Reports go to `out` as
// JSON; usage problems to `err`.  Exit codes: 0 = verdict computed (even a
// failing check), 1 = input error, 2 = resource guard tripped.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lgm

#endif  // LGM_CLI_HPP_
