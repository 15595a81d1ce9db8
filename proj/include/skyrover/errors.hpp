#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skyrover {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input. `offset` is the byte position where parsing stopped,
/// or npos when the error is not tied to a position.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t offset = std::string::npos)
      : Error(offset == std::string::npos ? what : what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

/// Self-describing file with a bad header, version or payload length.
class FormatError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A size cap or placement budget was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant broke. Always a bug in a solver or policy.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace skyrover
