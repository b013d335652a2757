#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mage {

// Exit status: 0 success, 1 usage/parse error, 2 domain error (degenerate
// or invalid mathematical input), 3 internal error.
struct CommandResult {
    std::string command;
    int dim = 0;
    std::string json; // full envelope, already serialized
    int exit_code = 0;
};

// argv excludes the program name. Deterministic: identical invocations
// produce byte-identical JSON.
CommandResult run_command(const std::vector<std::string>& argv);

// One invocation per line (quote-aware splitting, '#' comments); results are
// written to `out` in input order, one JSON document per line. Lines run in
// parallel. Returns the maximum exit code.
int run_batch(std::istream& lines, std::ostream& out);

// Entry point used by the binary; dispatches --batch <file>.
int cli_main(int argc, char** argv);

} // namespace mage
