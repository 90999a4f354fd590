#pragma once

#include <stdexcept>
#include <string>

namespace possalloc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor or operation received a parameter outside its admissible set.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of the function being evaluated
/// (a level outside [0,1], wealth outside the utility domain, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quadrature or integrand produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// The requested computation exists only for a narrower configuration.
class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

/// A risk indicator has a vanishing denominator at the requested wealth.
class IndicatorUndefined : public Error {
 public:
  using Error::Error;
};

/// The portfolio model has zero variance or zero risk aversion.
class DegenerateModel : public Error {
 public:
  using Error::Error;
};

/// The first-order condition has no sign change inside the feasible range.
class NoInteriorOptimum : public Error {
 public:
  using Error::Error;
};

}  // namespace possalloc
