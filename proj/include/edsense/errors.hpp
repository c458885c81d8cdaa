#pragma once

#include <stdexcept>
#include <string>

namespace edsense {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Root finder was handed an interval without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A weight table with zero total mass cannot be averaged over.
class DegenerateModelError : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo run produced no usable trials for a hypothesis class.
class EstimationError : public Error {
 public:
  using Error::Error;
};

}  // namespace edsense
