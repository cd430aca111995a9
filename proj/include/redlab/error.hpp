#ifndef REDLAB_ERROR_HPP
#define REDLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace redlab {

// Errors in user input: bad term/type/calculus syntax. Carries a 1-based
// position when the source location is known (0 means unknown).
struct ParseError : std::runtime_error {
  int line = 0;
  int col = 0;
  ParseError(const std::string& msg, int line_ = 0, int col_ = 0)
      : std::runtime_error(msg), line(line_), col(col_) {}
};

// Errors in otherwise well-formed requests: unknown calculus, unknown head,
// arity violations, invalid reduction position, generation failure.
struct DomainError : std::runtime_error {
  std::string code;  // stable machine-readable tag, e.g. "UnknownHead"
  DomainError(std::string code_, const std::string& msg)
      : std::runtime_error(msg), code(std::move(code_)) {}
};

}  // namespace redlab

#endif
