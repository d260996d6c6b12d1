#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dynsense {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments, violated preconditions, mismatched dimensions.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A configured cap or budget was exceeded. Never silently truncated.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// An internal verification step failed; indicates a bug, not bad input.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A symbolic point has a shape an operation does not support.
class UnsupportedPointError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Malformed text literal; carries the offending position.
class ParseError : public UsageError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : UsageError(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_ = 0;
};

}  // namespace dynsense
