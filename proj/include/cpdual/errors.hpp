#pragma once

#include <stdexcept>
#include <string>

namespace cpdual {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Precondition violations: bad shapes, non-Hermitian input, invalid ranges.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An iterative routine failed to converge within its cap.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// A Choi matrix failed the positivity test.
class NotCompletelyPositive : public Error {
 public:
  using Error::Error;
};

// Operator coefficients do not satisfy sum(a_i* a_i) = I.
class InvalidCoefficients : public Error {
 public:
  using Error::Error;
};

// A pairing oracle returned values inconsistent with linearity.
class InconsistentOracle : public Error {
 public:
  using Error::Error;
};

// Malformed serialized document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed document whose contents violate a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpdual
