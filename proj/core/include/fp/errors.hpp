#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fp {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax or structural error while parsing an expression or a frame
/// document. Carries the byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the domain of a function (sqrt/log of a negative number,
/// division by zero, ...). The message names the offending subexpression
/// when one is known.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be invertible is numerically singular.
class SingularError : public Error {
 public:
  using Error::Error;
};

}  // namespace fp
