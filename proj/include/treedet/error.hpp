#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treedet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or a request outside the supported envelope (CLI exit code 1).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input whose mathematical preconditions cannot be met (CLI exit code 2).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class InvalidDistribution : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EquivalenceViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnknownSymbol : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EnumerationTooLarge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidParams : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotUniform : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class StateSpaceTooLarge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateFamily : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class EpsilonTooLarge : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class EmptyAfterPrune : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class Unachievable : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

/// A level-k threshold outside its open feasibility interval.
class InfeasibleThreshold : public InfeasibleError {
 public:
  InfeasibleThreshold(std::size_t level, double threshold, double lo, double hi);

  std::size_t level() const { return level_; }
  double threshold() const { return threshold_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }

 private:
  std::size_t level_;
  double threshold_;
  double lo_;
  double hi_;
};

}  // namespace treedet
