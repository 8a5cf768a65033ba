#pragma once

#include <stdexcept>
#include <string>

namespace galekit {

// Argument outside the mathematical domain of an operation (alpha outside
// (0,1), s >= 1 for an order, a malformed rational, ...). CLI exit code 1.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Reading or writing a bitstream failed. CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite source was asked for more bits than it holds.
class TruncationError : public IoError {
 public:
  using IoError::IoError;
};

// A value broke a structural law it is required to satisfy, e.g. a process
// evaluated to a negative number or an oracle was not anti-monotone.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace galekit
