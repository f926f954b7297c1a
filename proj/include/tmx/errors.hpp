#pragma once

#include <stdexcept>
#include <string>

namespace tmx {

enum class ErrorCode {
  InvalidProfile,
  InvalidArgument,
  InfiniteMass,
  DivisionByZero,
  Overflow,
  NotMonotone,
  NotNormalized,
  NoPlateau,
  Infeasible,
  NoConvergence,
  RegimeMismatch,
  EnergyBudgetExceeded,
  ZeroBoundaryValue,
  NoSignChange,
  StiffnessFailure,
  ConditionFailed,
  NormBudgetExceeded,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InfiniteMass: return "InfiniteMass";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NoPlateau: return "NoPlateau";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RegimeMismatch: return "RegimeMismatch";
    case ErrorCode::EnergyBudgetExceeded: return "EnergyBudgetExceeded";
    case ErrorCode::ZeroBoundaryValue: return "ZeroBoundaryValue";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::StiffnessFailure: return "StiffnessFailure";
    case ErrorCode::ConditionFailed: return "ConditionFailed";
    case ErrorCode::NormBudgetExceeded: return "NormBudgetExceeded";
  }
  return "Unknown";
}

/// Library-wide exception carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tmx
