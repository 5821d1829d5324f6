#pragma once

#include <stdexcept>
#include <string>

namespace optrec {

/// Raised when an argument violates an operation's precondition
/// (dimension mismatch, exponent out of range, point outside the domain, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the data admit no Hölder function within the stated error bounds.
class InadmissibleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace optrec
