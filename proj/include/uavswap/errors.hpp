#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace uavswap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: scenario documents, generator parameters, config values.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string message) : Error(message) {}
  ValidationError(std::string message, std::vector<std::string> fields)
      : Error(std::move(message)), fields_(std::move(fields)) {}

  /// Field-level diagnostics, one entry per offending field.
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidGeoPoint : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidParams : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A state-of-charge value left [0, 1] from below.
class ModelViolation : public Error {
 public:
  using Error::Error;
};

class IllegalTransition : public Error {
 public:
  using Error::Error;
};

/// Malformed mission-plan or scenario document.
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersion : public ParseError {
 public:
  using ParseError::ParseError;
};

class NoWaypoints : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Reservation requested on an occupied station window.
class Conflict : public Error {
 public:
  using Error::Error;
};

/// No plan satisfies the battery, schedule and SoC-floor constraints.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// The search ran out of its time or memory budget before finding a plan.
class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class Timeout : public SearchBudgetExceeded {
 public:
  using SearchBudgetExceeded::SearchBudgetExceeded;
};

class MemoryBudgetExceeded : public SearchBudgetExceeded {
 public:
  using SearchBudgetExceeded::SearchBudgetExceeded;
};

/// A plan failed replay validation. Signals a planner bug or a tampered plan.
class PlanViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace uavswap
