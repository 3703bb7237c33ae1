#pragma once

#include <stdexcept>
#include <string>

namespace laststop {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or malformed input data. The CLI maps this to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation could not be carried out. The CLI maps this to exit code 1.
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// A trial with success probability 1 has no finite odds ratio.
class InfiniteOddsError : public ComputationError {
 public:
  explicit InfiniteOddsError(int index)
      : ComputationError("odds ratio is infinite at trial " + std::to_string(index) +
                         " (success probability is 1)"),
        index_(index) {}

  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// A truncated distribution cannot answer the query (mass above the cap).
class IncompleteDistributionError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// A partial result exceeded the floating-point range.
class OverflowError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace laststop
