#pragma once

#include <stdexcept>
#include <string>

namespace disclab {

// Malformed input file. `line` is the 1-based line the problem was found on.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A caller broke a documented precondition.
class contract_error : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An internal invariant failed. This always indicates a bug; the CLI maps
// it to exit code 3.
class internal_error : public std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace disclab
