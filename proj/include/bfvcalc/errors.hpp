#pragma once

#include <stdexcept>
#include <string>

namespace bfvcalc {

// Bad user input: malformed text, unknown generator, out-of-range index.
struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Input is well-formed but violates a mathematical precondition (not a
// Poisson structure, fiber not coisotropic, section obstruction nonzero).
// The message carries the offending residual so callers can print it.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// An identity the machinery guarantees failed to hold. Reaching this means
// a bug in the library, never bad input.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace bfvcalc
