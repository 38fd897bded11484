#pragma once

#include <stdexcept>
#include <string>

namespace daclab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter violates a precondition.
struct InvalidParam : Error {
  using Error::Error;
};

// No overlap exponent k in [0, 0.99] reaches the requested rate.
struct Infeasible : Error {
  using Error::Error;
};

// Common-factor allocation would push a subinterval probability above 1.
struct DoesNotFit : Error {
  using Error::Error;
};

// Malformed or truncated bitstream container.
struct ParseError : Error {
  using Error::Error;
};

// Every path in the decoder frontier was dropped.
struct EmptyFrontier : Error {
  using Error::Error;
};

// Joint decoding found both streams claiming the same index, or the
// nominally unambiguous stream turned out ambiguous.
struct RoleViolation : Error {
  using Error::Error;
};

}  // namespace daclab
