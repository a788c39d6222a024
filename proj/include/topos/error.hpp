#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topos {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Morphisms whose endpoints do not line up.
class CompositionError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (e.g. character of a non-monic).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A topos implementation produced a classifier that fails its own universal
/// property. Seeing this means the implementation is broken, not the input.
class ClassifierViolation : public Error {
 public:
  using Error::Error;
};

/// The host category lacks a construction the caller asked for.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed the configured size caps.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Unknown function, relation or constant symbol.
class SignatureError : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (bad labels, non-total tables, broken functor laws).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Something that can never happen for a correct topos implementation
/// (e.g. K of P1 not isomorphic to 1).
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Diagnostic with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace topos
