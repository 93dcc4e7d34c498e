#ifndef OPNORM_ERRORS_HPP_
#define OPNORM_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opnorm {

// Malformed arguments: non-finite values, negative entries where a
// nonnegative matrix is required, exponents out of range.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parse failure while reading a matrix or manifest. line() is 1-based, 0 when
// the error is not tied to a line.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& message, std::size_t line)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " +
                                           message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A dimension or enumeration cap would be exceeded.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// An operation was called on a point that does not satisfy its documented
// precondition (e.g. a Hessian probe away from a critical point).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace opnorm

#endif  // OPNORM_ERRORS_HPP_
