#pragma once

#include <stdexcept>
#include <string>

namespace lswspec {

//! Input that cannot be parsed or fails a precondition at the tool boundary.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

//! Parse failure with a source location, used by the spectrum-file reader.
class ParseError : public InputError {
public:
  ParseError(const std::string& msg, int line, int column)
    : InputError(msg + " at line " + std::to_string(line) + ", column " +
                 std::to_string(column))
    , line_(line)
    , column_(column)
  {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

//! Linear algebra gone bad (singular Gram matrix, inverse residual too large).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

//! Request exceeds a hard memory bound (dense T x T storage).
class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace lswspec
