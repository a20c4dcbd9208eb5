#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace depthq {

// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind {
  kInvalidParameter,  // bad tau, K, lambda, ... (exit 2)
  kData,              // unreadable or inconsistent input (exit 3)
  kComputation,       // singular design, contract violations (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what)
      : Error(ErrorKind::kInvalidParameter, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyInput : public DataError {
 public:
  explicit EmptyInput(const std::string& what) : DataError(what) {}
};

class MissingCovariate : public DataError {
 public:
  MissingCovariate() : DataError("dataset has no covariate column") {}
};

class SizeLimitError : public DataError {
 public:
  explicit SizeLimitError(const std::string& what) : DataError(what) {}
};

class ComputationError : public Error {
 public:
  explicit ComputationError(const std::string& what)
      : Error(ErrorKind::kComputation, what) {}
};

// All abscissas equal: the two-column design matrix has rank one.
class SingularDesign : public ComputationError {
 public:
  SingularDesign()
      : ComputationError("design matrix is singular (all abscissas equal)") {}
};

class InsufficientData : public ComputationError {
 public:
  explicit InsufficientData(const std::string& what) : ComputationError(what) {}
};

// Raised when a caller breaks a documented precondition or a solver hits a
// state that indicates a construction bug (infeasible/unbounded LP).
class ContractViolation : public ComputationError {
 public:
  explicit ContractViolation(const std::string& what)
      : ComputationError(what) {}
};

class UndefinedDistance : public ComputationError {
 public:
  UndefinedDistance()
      : ComputationError("Hausdorff distance is undefined for an empty region") {}
};

class IoError : public DataError {
 public:
  explicit IoError(const std::string& what) : DataError(what) {}
};

}  // namespace depthq
