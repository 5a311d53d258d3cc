#pragma once

#include <stdexcept>
#include <string>

namespace lrcmcf {

// Process exit codes used by the command-line tool. Each error class below
// maps to exactly one of these.
enum class ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kValidation = 3,
  kIo = 4,
  kSolver = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Bad hyperparameters or option values (K out of range, r <= 1, ...).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ExitCode::kConfig, "config error: " + what) {}
};

// Input data that violates a precondition (non-finite values, ragged rows,
// mismatched row counts, negative affinities, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ExitCode::kValidation, "validation error: " + what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what)
      : Error(ExitCode::kIo, "io error: " + what) {}
};

// Numerical failure (eigensolver did not converge, residual too large).
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what)
      : Error(ExitCode::kSolver, "solver error: " + what) {}
};

}  // namespace lrcmcf
