#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathgain {

enum class ErrorKind {
  NotPrime,
  ReducibleModulus,
  CardinalityTooLarge,
  DivisionByZero,
  FieldMismatch,
  ParseError,
  CyclicGraph,
  DanglingDemand,
  DuplicateEdgeId,
  UnsatisfiableDemand,
  BudgetExceeded,
  BranchBudgetExceeded,
  InadmissibleCharacteristic,
  LiftInconsistency,
  NotASolution,
  RankViolation,
  InfeasibleParams,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace pathgain
