#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathgain/galois.hpp"
#include "pathgain/poly.hpp"

namespace pathgain {

/// Which field characteristics can still admit a solution.
struct CharVerdict {
  enum class Kind { NoConstraint, OnlyCharsDividing, Unsolvable };
  Kind kind = Kind::NoConstraint;
  std::uint64_t n = 0;  // squarefree; only for OnlyCharsDividing

  static CharVerdict none() { return {}; }
  static CharVerdict unsolvable() { return {Kind::Unsolvable, 0}; }
  static CharVerdict dividing(std::uint64_t n);
  /// From the integer constants c of derived equations c = 0.
  static CharVerdict from_constants(const std::vector<std::int64_t>& constants);

  bool admits(std::uint64_t characteristic) const;
  /// "no-constraint", "chars-dividing:<n>" or "unsolvable".
  std::string to_string() const;
  static CharVerdict parse(const std::string& text);

  friend bool operator==(const CharVerdict&, const CharVerdict&) = default;
};

struct SimplifyStep {
  enum class Kind { Eliminated, Dropped };
  Kind kind = Kind::Eliminated;
  int var = -1;      // index into the original system
  Poly expr;         // var = expr, over original indices
  std::string tag;   // tag of the equation used
  friend bool operator==(const SimplifyStep&, const SimplifyStep&) = default;
};

struct SimplifyResult {
  PolySystem original;
  /// Remaining variables (including ones left in no equation) and equations.
  PolySystem reduced;
  std::vector<int> reduced_to_original;
  /// Eliminations and drops in the order they happened.
  std::vector<SimplifyStep> steps;
  std::vector<std::int64_t> constants;
  CharVerdict verdict;
  std::vector<std::string> branch_log;
  bool branch_budget_exceeded = false;

  std::vector<SimplifyStep> trace() const;
  std::vector<SimplifyStep> dropped() const;

  friend bool operator==(const SimplifyResult&, const SimplifyResult&) = default;
};

struct DropResult {
  PolySystem system;  // dropped variables removed, the rest renumbered
  std::vector<SimplifyStep> dropped;  // indices into the input system
};

/// Removes variables that occur only in a single linear equation, with
/// coefficient +-1, together with that equation; repeated to a fixpoint.
DropResult drop_unused(const PolySystem& system);

/// Alternates drop_unused with elimination through linear equations that
/// have a +-1 coefficient, moving constant equations into the verdict.
SimplifyResult linear_eliminate(const PolySystem& system);

struct BranchOptions {
  int depth = 4;
  int width = 64;
};

/// Case analysis on single-monomial equations c*M = 0 (also derived from
/// pairs P+Q, P-Q): either a variable of M is zero or the characteristic
/// divides c. Narrows `result.verdict`; when the limits are hit the verdict
/// keeps its coarser value and `branch_budget_exceeded` is set.
void branch_analyze(SimplifyResult& result, const BranchOptions& options = {});

/// linear_eliminate followed by branch_analyze.
SimplifyResult simplify(const PolySystem& system, const BranchOptions& options = {});

/// Extends values of the reduced variables (packed field indices, ordered as
/// `result.reduced`) to all original variables and checks the original system.
std::vector<std::uint32_t> lift_solution(const SimplifyResult& result, const FieldSpec& field,
                                         const std::vector<std::uint32_t>& reduced_values);

nlohmann::ordered_json simplify_result_to_json(const SimplifyResult& result);
SimplifyResult simplify_result_from_json(const nlohmann::json& doc);
void simplify_result_save(const SimplifyResult& result, const std::filesystem::path& path);

}  // namespace pathgain
