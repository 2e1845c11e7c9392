#pragma once

#include <stdexcept>
#include <string>

namespace limid {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration cap (joint-configuration or strategy-space) was exceeded.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// Every utility entry has the same value, so every strategy is optimal.
// Carries enough information for callers to build the degenerate answer.
class TrivialDiagramError : public Error {
 public:
  TrivialDiagramError(const std::string& what, double value, int utility_count)
      : Error(what), value(value), utility_count(utility_count) {}
  double value = 0.0;
  int utility_count = 0;
};

// A documented precondition of an operation was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A variable assignment handed to extract_strategy is not usable.
class InvalidAssignmentError : public Error {
 public:
  using Error::Error;
};

// A strategy selection leaves some imprecise node uncovered.
class IncompleteSelectionError : public Error {
 public:
  using Error::Error;
};

// A random-diagram spec cannot be instantiated.
class SpecError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside the LP solver.
class SolverError : public Error {
 public:
  using Error::Error;
};

// Bad input file or document.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace limid
