#pragma once

#include <stdexcept>
#include <string>

namespace bosonic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Input outside the domain of an operation (zero vector, y <= 0, |x| >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A Moebius denominator vanished: the point maps to infinity.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NonFiniteSample : public Error {
 public:
  using Error::Error;
};

}  // namespace bosonic
