#pragma once

#include <stdexcept>
#include <string>

namespace loggas {

enum class ErrorKind {
  // input validation
  AsymmetricInput,
  NonzeroDiagonal,
  TooSmall,
  ZeroCharge,
  InvalidSpec,
  InvalidInput,
  InvalidParity,
  SingleSignCharges,
  TooFewParticles,
  NotNeutral,
  ConditionsFail,
  EdgelessGraph,
  CoincidentPoints,
  EmptySample,
  DegenerateGrid,
  // size limits
  InstanceTooLarge,
  FamilyTooLarge,
  // domain
  NotCritical,
  OutsideDomain,
  OutsideInterval,
  // numerics
  NoConvergence,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::AsymmetricInput: return "AsymmetricInput";
    case ErrorKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::ZeroCharge: return "ZeroCharge";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidParity: return "InvalidParity";
    case ErrorKind::SingleSignCharges: return "SingleSignCharges";
    case ErrorKind::TooFewParticles: return "TooFewParticles";
    case ErrorKind::NotNeutral: return "NotNeutral";
    case ErrorKind::ConditionsFail: return "ConditionsFail";
    case ErrorKind::EdgelessGraph: return "EdgelessGraph";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::DegenerateGrid: return "DegenerateGrid";
    case ErrorKind::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::FamilyTooLarge: return "FamilyTooLarge";
    case ErrorKind::NotCritical: return "NotCritical";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::OutsideInterval: return "OutsideInterval";
    case ErrorKind::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Process exit code for the CLI: 2 input error, 3 size limit, 4 domain error.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InstanceTooLarge:
    case ErrorKind::FamilyTooLarge:
      return 3;
    case ErrorKind::NotCritical:
    case ErrorKind::OutsideDomain:
    case ErrorKind::OutsideInterval:
      return 4;
    default:
      return 2;
  }
}

}  // namespace loggas
