#pragma once

#include <stdexcept>
#include <string>

namespace nsa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Undeclared or duplicate identifier, or a statement of the wrong shape.
class DeclarationError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input outside the supported class (mixed derivatives in a
/// Lagrangian, ln of a sum, ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A jet or partial-derivative order exceeded the configured cap.
class OrderCapError : public UnsupportedError {
 public:
  using UnsupportedError::UnsupportedError;
};

/// Argument violates an operation's precondition (phi = 0, unknown id, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace nsa
