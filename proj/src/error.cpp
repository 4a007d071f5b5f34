#include "pathgain/error.hpp"

namespace pathgain {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ReducibleModulus: return "ReducibleModulus";
    case ErrorKind::CardinalityTooLarge: return "CardinalityTooLarge";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::CyclicGraph: return "CyclicGraph";
    case ErrorKind::DanglingDemand: return "DanglingDemand";
    case ErrorKind::DuplicateEdgeId: return "DuplicateEdgeId";
    case ErrorKind::UnsatisfiableDemand: return "UnsatisfiableDemand";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::BranchBudgetExceeded: return "BranchBudgetExceeded";
    case ErrorKind::InadmissibleCharacteristic: return "InadmissibleCharacteristic";
    case ErrorKind::LiftInconsistency: return "LiftInconsistency";
    case ErrorKind::NotASolution: return "NotASolution";
    case ErrorKind::RankViolation: return "RankViolation";
    case ErrorKind::InfeasibleParams: return "InfeasibleParams";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace pathgain
