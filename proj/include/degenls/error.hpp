/// @file error.hpp
/// @brief Error kinds raised by the solvers.
///
/// Every failure carries a machine-readable kind so the CLI can map it to an
/// exit code and a JSON error object without string matching.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace degenls {

enum class ErrorKind {
  InvalidParameter,
  ExistenceWindow,
  GridRange,
  LengthMismatch,
  InvalidSector,
  NonConvergence,
  BracketInvalid,
  ConstantSolution,
  StiffnessFailure,
  SingularLPlus,
  EigensolverBreakdown,
  FixedPointDivergence,
  WindowTooShort,
  ResolutionInsufficient,
  Config,
};

/// Stable identifier used in JSON error objects.
constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::ExistenceWindow: return "existence-window";
    case ErrorKind::GridRange: return "grid-range";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::InvalidSector: return "invalid-sector";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::BracketInvalid: return "bracket-invalid";
    case ErrorKind::ConstantSolution: return "constant-solution";
    case ErrorKind::StiffnessFailure: return "stiffness-failure";
    case ErrorKind::SingularLPlus: return "singular-l-plus";
    case ErrorKind::EigensolverBreakdown: return "eigensolver-breakdown";
    case ErrorKind::FixedPointDivergence: return "fixed-point-divergence";
    case ErrorKind::WindowTooShort: return "window-too-short";
    case ErrorKind::ResolutionInsufficient: return "resolution-insufficient";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by minimize_weinstein when max_iter is exhausted.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, int iterations, double last_residual)
      : Error(ErrorKind::NonConvergence, what),
        iterations_(iterations),
        last_residual_(last_residual) {}

  int iterations() const noexcept { return iterations_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  int iterations_;
  double last_residual_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace degenls
