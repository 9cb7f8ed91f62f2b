#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sullivan {

// Runs one CLI invocation; `args` are the words after the program name, e.g.
// {"gottlieb", "zoo.txt", "S2"}.  The JSON result (or, with --human, an
// aligned text rendering) is written to `out`, error messages to `err`.
// Returns the process exit code:
//   0  success
//   1  mathematical validation failure (invalid model, failed check,
//      maps proven non-homotopic)
//   2  parse or usage error (bad grammar, unknown command or name)
//   3  the degree bound cannot certify the requested answer
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace sullivan
