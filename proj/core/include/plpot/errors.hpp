#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace plpot {

enum class ErrorKind {
  DegenerateBody,
  NegativeCoordinate,
  DimensionMismatch,
  ConstantPolynomial,
  Unreachable,
  UnboundedLevelSet,
  EmptySample,
  EmptyEffectiveSample,
  Unbounded,
  SolverStall,
  NotMonotone,
  NonFiniteSample,
  QuadratureTooCoarse,
  PreconditionViolation,
  ContractViolation,
  ToleranceExceeded,
  UnknownGenerator,
  ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateBody: return "DegenerateBody";
    case ErrorKind::NegativeCoordinate: return "NegativeCoordinate";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ConstantPolynomial: return "ConstantPolynomial";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::UnboundedLevelSet: return "UnboundedLevelSet";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::EmptyEffectiveSample: return "EmptyEffectiveSample";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::SolverStall: return "SolverStall";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::NonFiniteSample: return "NonFiniteSample";
    case ErrorKind::QuadratureTooCoarse: return "QuadratureTooCoarse";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::ContractViolation: return "ContractViolation";
    case ErrorKind::ToleranceExceeded: return "ToleranceExceeded";
    case ErrorKind::UnknownGenerator: return "UnknownGenerator";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace plpot
