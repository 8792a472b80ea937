#pragma once

#include <stdexcept>
#include <string>

namespace loccert {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Exact and float operands were mixed in a single operation.
struct ModeMismatchError : Error {
  using Error::Error;
};

/// An operation is not supported by the requested scalar backend
/// (e.g. conic feasibility is exact-only).
struct BackendError : Error {
  using Error::Error;
};

/// Input data violates a documented precondition or invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// A document could not be parsed; the message carries the offending
/// location (e.g. "elements[3].factors[0][1][2].re").
struct ParseError : Error {
  using Error::Error;
};

/// Tree pruning could not satisfy its contract on the given input.
struct PruneError : Error {
  using Error::Error;
};

/// Internal consistency failure (certificate verification, loop guards).
/// Indicates a bug in this library, never bad user input.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace loccert
