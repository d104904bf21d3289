#pragma once

#include <stdexcept>
#include <string>

namespace cartanlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different atom sets, or a map is not injective.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class OrthogonalityError : public Error {
 public:
  OrthogonalityError(std::string message, std::size_t first, std::size_t second)
      : Error(std::move(message)), first_(first), second_(second) {}
  /// Positions (in the input family) of the offending pair.
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// An element list is not closed under product or dagger.
class ClosureError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the argument's value failed.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document or table.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A brute-force search would exceed its configured bound.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed; always a bug or corrupted input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace cartanlab
