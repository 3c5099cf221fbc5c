#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qmont {

/// Base class of everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on (q, a, b, x, c, t, r, ...) was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A function evaluation failed: domain violation or non-finite result.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// An iterative limit did not stabilize within the term cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A lattice search ran past its iteration cap.
class CapError : public Error {
 public:
  using Error::Error;
};

/// Expression parse failure. Carries the byte offset of the offending
/// token and a description of what would have been accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset, std::string expected)
      : Error(message + " at offset " + std::to_string(offset) + " (expected " + expected + ")"),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

}  // namespace qmont
