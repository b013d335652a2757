#pragma once

#include <stdexcept>
#include <string>

namespace mage {

// Mathematical precondition violated or input outside an operation's domain
// (degenerate form, wrong degree, non-closed input, ...). The CLI maps this
// to exit code 2.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Syntax error in the expression DSL. CLI exit code 1.
struct ParseError : std::runtime_error {
    int line = 1;
    int column = 1;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) +
                             ", column " + std::to_string(col_) + ")"),
          line(line_), column(col_) {}
};

} // namespace mage
