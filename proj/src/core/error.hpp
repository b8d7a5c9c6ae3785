#pragma once

#include <stdexcept>
#include <string>

namespace bribesim {

enum class ErrorCode {
  InvalidParameter = 1,
  Domain,
  Numerical,
  Structure,
  Size,
  Config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a stationary solve cannot reach the requested residual.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(ErrorCode::Numerical, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace bribesim
